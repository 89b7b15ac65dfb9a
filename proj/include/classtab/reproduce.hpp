#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "classtab/train.hpp"

namespace classtab {

inline constexpr const char* kVersion = "0.1.0";

struct CaseResult {
  std::string name;
  std::string provenance;  // paper | derived-oracle | trivial
  std::string mode;
  double paper_value = std::numeric_limits<double>::quiet_NaN();
  double computed = std::numeric_limits<double>::quiet_NaN();
  double uncertainty = std::numeric_limits<double>::quiet_NaN();
  std::string status;  // pass | fail | documented deviation
  std::string note;
};

struct ReproductionReport {
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<CaseResult> cases;
  double runtime_seconds = 0.0;

  bool all_pass() const;
  std::vector<std::string> failing_cases() const;
};

/// Result of the desk-scale stability chain: train a rounding net, then
/// compare class stabilities, estimate the mismatch measure and check
/// the anchor points.
struct ChainResult {
  TrainReport train_report;
  double target_stability = 0.0;
  double target_std_error = 0.0;
  double net_stability = 0.0;
  double net_std_error = 0.0;
  double deficit = 0.0;  // max(0, target - net)
  double mismatch_measure = 0.0;
  double mismatch_std_error = 0.0;
  int anchors_matched = 0;
  int anchors_total = 0;
  bool pass_deficit = false;
  bool pass_mismatch = false;
  bool pass_anchors = false;
  Mlp net;
};

ChainResult run_stability_chain(const ExtendedField& field, const NormP& p,
                                double eps1, double eps2, const Mat& anchors,
                                std::uint64_t seed, const TrainOptions& topts);

/// The chain on the disk-in-square task with eps1 = eps2 = 0.05 and five
/// anchor points; shared by the report and by the acceptance suite.
ChainResult default_disk_chain(std::uint64_t seed);

/// Runs the full reproduction table.
ReproductionReport run_reproduction(std::uint64_t seed);

void write_report_json(const ReproductionReport& report, const std::string& path);
void write_report_csv(const ReproductionReport& report, const std::string& path);
std::string report_to_json_string(const ReproductionReport& report);

}  // namespace classtab
