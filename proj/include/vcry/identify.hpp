#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "vcry/cipher.hpp"
#include "vcry/features.hpp"
#include "vcry/keys.hpp"
#include "vcry/signal.hpp"

namespace vcry {

// One enrolled reference: where its ciphertext lives plus the feature
// vectors cached from the plaintext at enrollment time.
struct TemplateEntry {
    std::string speaker_id;
    std::string template_id;
    std::string template_path; // relative to the DB directory
    std::string digest;        // plaintext content digest (duplicate guard)
    std::string enrolled_at;   // ISO-8601 UTC
    std::array<Eigen::ArrayXd, kAllMethods.size()> features; // Method order
};

// Per-dimension statistics used for z-score normalization of one method.
struct MethodStats {
    Eigen::ArrayXd mean;
    Eigen::ArrayXd stddev;
};

struct RankedEntry {
    std::string speaker_id;
    std::string template_id;
    double distance = 0.0;
};

struct RankedResult {
    std::vector<RankedEntry> ranking; // distance ascending
    std::string decision;             // speaker of the closest template
};

struct AccuracyRow {
    Method method = Method::pitch;
    double accuracy_pct = 0.0;
    int correct = 0;
    int total = 0;
};

// Plain Euclidean distance with method/length checking; callers that want
// scale-free comparison pass vectors through TemplateDB normalization first.
double euclidean(const FeatureVector& a, const FeatureVector& b);

// Directory-backed template store: manifest.json plus one .vcr per template.
// Plaintext audio never touches the directory; only ciphertext and the
// cached (non-invertible) feature vectors persist.
class TemplateDB {
public:
    // Load an existing store, or start an empty one in `dir` (created on the
    // first enrollment).
    static TemplateDB open(const std::filesystem::path& dir);

    const std::filesystem::path& dir() const { return dir_; }
    const std::vector<TemplateEntry>& entries() const { return entries_; }
    const MethodStats& stats(Method m) const {
        return stats_[static_cast<std::size_t>(m)];
    }

    // Encrypt s into a new template file, cache its feature vectors for all
    // methods, refresh the normalization statistics, rewrite the manifest.
    const TemplateEntry& enroll(const std::string& speaker_id, const Signal& s,
                                const KeyPair& keys, double gain = 1.0,
                                const FrameConfig& cfg = {});

    // Distance from a probe vector to one cached vector; normalized mode
    // z-scores both sides with the DB statistics (zero-variance dimensions
    // are skipped), so the ranking is invariant to per-dimension scale.
    double distance(const FeatureVector& probe, const Eigen::ArrayXd& cached,
                    bool normalized = true) const;

    // Closed-set identification: full ascending ranking over every cached
    // template, ties broken by speaker then template id.
    RankedResult identify(const Signal& s, Method m, bool normalized = true,
                          const FrameConfig& cfg = {}) const;
    RankedResult identify_features(const FeatureVector& probe,
                                   bool normalized = true) const;

private:
    void recompute_stats();
    void save() const;

    std::filesystem::path dir_;
    std::vector<TemplateEntry> entries_;
    std::array<MethodStats, kAllMethods.size()> stats_;
};

// Identify every WAV under test_dir (one subdirectory per speaker) against
// the store and tabulate per-method accuracy, sorted descending.
std::vector<AccuracyRow> accuracy_bench(const std::filesystem::path& db_dir,
                                        const std::filesystem::path& test_dir,
                                        const std::vector<Method>& methods,
                                        bool normalized = true,
                                        const FrameConfig& cfg = {});

} // namespace vcry
