#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zcover/errors.hpp"

namespace zcover {

using Json = nlohmann::ordered_json;

struct ExperimentConfig {
    std::string experiment;
    std::size_t n = 20;
    std::optional<double> alpha;
    std::optional<double> p;
    int d = 1;
    std::size_t trials = 100;
    std::uint64_t baseSeed = 0;
    /// -1 picks a per-experiment default.
    int maxDim = -1;
    std::size_t maxCliqueSize = 0;  // 0 means d + 1
    double tol = 1e-9;
    std::vector<double> cConst = {1.0};
    double gapThreshold = 0.8;
    /// gap-concentration: "symmetric" or "asymmetric" link model.
    std::string model = "symmetric";
    std::size_t maxFaces = 20'000'000;
    std::size_t maxNnz = 50'000'000;
    double trialSeconds = 600;
    /// Whole-campaign wall time; 0 disables it.
    double campaignSeconds = 0;
    /// Worker threads; 0 uses the hardware concurrency.
    std::size_t workers = 0;
    std::string out;
    std::string format = "records";
};

/// Edge probability: p if given, else n^-alpha.
double edge_probability(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);
const std::vector<std::string>& experiment_names();

/// "key = value" lines; blank lines and '#' comments are skipped. Keys are the
/// long flag names (n, alpha, p, d, trials, seed, max-dim, tol, out, format)
/// plus experiment, max-clique-size, c-const (comma list), gap-threshold,
/// model, max-faces, max-nnz, trial-seconds, campaign-seconds, workers.
void apply_config_text(ExperimentConfig& cfg, std::istream& in);
void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct TrialRecord {
    std::string experiment;
    std::uint64_t seed = 0;
    Json measured = Json::object();
    Json pass = Json::object();
    bool aborted = false;
    std::string abortReason;
    double wallSeconds = 0;
};

/// Raised when the campaign-wide wall-time cap is hit.
class CampaignAborted : public ResourceLimitError {
public:
    using ResourceLimitError::ResourceLimitError;
};

/// One trial; resource-cap breaches give an aborted record.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t seed);

/// Seeds baseSeed .. baseSeed + trials - 1 on a worker pool, records sorted by seed.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

Json record_json(const TrialRecord& r);
TrialRecord record_from_json(const Json& j);
void write_records(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records(std::istream& in);
/// Header row from the union of keys; list values are joined with ';'.
void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);

struct Interval {
    double lo = 0;
    double hi = 0;
};

Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct FlagSummary {
    std::size_t successes = 0;
    std::size_t trials = 0;
    double frequency = 0;
    Interval wilson;
    std::vector<std::uint64_t> failingSeeds;
};

struct NumericSummary {
    std::size_t count = 0;
    double mean = 0;
    double sd = 0;
    double min = 0;
    double max = 0;
    std::uint64_t argmin = 0;
    std::uint64_t argmax = 0;
};

struct Summary {
    std::string experiment;
    std::size_t records = 0;
    std::size_t aborted = 0;
    std::map<std::string, FlagSummary> flags;
    std::map<std::string, NumericSummary> numeric;
};

Summary summarize(const std::vector<TrialRecord>& records);
Json summary_json(const Summary& s);

}  // namespace zcover
