#include "vcry/identify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "vcry/audio.hpp"
#include "vcry/errors.hpp"

namespace vcry {
namespace {

using nlohmann::json;

constexpr int kManifestVersion = 1;

std::size_t idx(Method m) { return static_cast<std::size_t>(m); }

// FNV-1a over the raw sample bytes and the rate; collision resistance far
// beyond what duplicate detection within one store needs.
std::string content_digest(const Signal& s) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const unsigned char* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(reinterpret_cast<const unsigned char*>(s.samples.data()),
        static_cast<std::size_t>(s.samples.size()) * sizeof(double));
    const auto rate = static_cast<std::uint32_t>(s.sample_rate);
    mix(reinterpret_cast<const unsigned char*>(&rate), sizeof(rate));
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

// SOURCE_DATE_EPOCH (the reproducible-build convention) pins the clock so
// that scripted enrollments produce byte-identical manifests.
std::string enrollment_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (end != epoch && *end == '\0')
            t = static_cast<std::time_t>(v);
    }
    std::tm tm = {};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool safe_speaker_id(const std::string& id) {
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_';
    });
}

json to_json(const Eigen::ArrayXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(v[i]);
    return arr;
}

Eigen::ArrayXd from_json(const json& arr, Eigen::Index expected,
                         const std::string& what) {
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != expected)
        fail(Err::BadFormat, "manifest: " + what + " must hold " +
                                 std::to_string(expected) + " numbers");
    Eigen::ArrayXd v(expected);
    for (Eigen::Index i = 0; i < expected; ++i)
        v[i] = arr[static_cast<std::size_t>(i)].get<double>();
    return v;
}

} // namespace

double euclidean(const FeatureVector& a, const FeatureVector& b) {
    if (a.method != b.method)
        fail(Err::MethodMismatch, "comparing vectors of different methods");
    if (a.values.size() != b.values.size())
        fail(Err::LengthMismatch, "comparing vectors of different lengths");
    return std::sqrt((a.values - b.values).square().sum());
}

TemplateDB TemplateDB::open(const std::filesystem::path& dir) {
    TemplateDB db;
    db.dir_ = dir;

    const std::filesystem::path manifest = dir / "manifest.json";
    if (!std::filesystem::exists(manifest)) {
        db.recompute_stats();
        return db;
    }

    std::ifstream is(manifest);
    if (!is)
        fail(Err::IoFailure, "cannot open: " + manifest.string());
    json doc;
    try {
        is >> doc;
    } catch (const json::exception& e) {
        fail(Err::BadFormat, "manifest is not valid JSON: " + std::string(e.what()));
    }

    if (!doc.is_object() || doc.value("format_version", -1) != kManifestVersion)
        fail(Err::BadFormat, "manifest: unsupported format version");
    for (const json& e : doc.value("entries", json::array())) {
        TemplateEntry entry;
        entry.speaker_id = e.value("speaker_id", "");
        entry.template_id = e.value("template_id", "");
        entry.template_path = e.value("template_path", "");
        entry.digest = e.value("digest", "");
        entry.enrolled_at = e.value("enrolled_at", "");
        if (entry.speaker_id.empty() || entry.template_id.empty() ||
            entry.template_path.empty())
            fail(Err::BadFormat, "manifest: entry missing identity fields");
        const json& feats = e.at("features");
        for (const Method m : kAllMethods)
            entry.features[idx(m)] =
                from_json(feats.at(method_name(m)), method_dim(m),
                          std::string("features.") + method_name(m));
        db.entries_.push_back(std::move(entry));
    }
    db.recompute_stats();
    return db;
}

void TemplateDB::recompute_stats() {
    for (const Method m : kAllMethods) {
        const Eigen::Index dim = method_dim(m);
        MethodStats& st = stats_[idx(m)];
        st.mean = Eigen::ArrayXd::Zero(dim);
        st.stddev = Eigen::ArrayXd::Zero(dim);
        if (entries_.empty())
            continue;
        for (const TemplateEntry& e : entries_)
            st.mean += e.features[idx(m)];
        st.mean /= static_cast<double>(entries_.size());
        for (const TemplateEntry& e : entries_)
            st.stddev += (e.features[idx(m)] - st.mean).square();
        st.stddev = (st.stddev / static_cast<double>(entries_.size())).sqrt();
    }
}

void TemplateDB::save() const {
    json doc;
    doc["format_version"] = kManifestVersion;
    json entries = json::array();
    for (const TemplateEntry& e : entries_) {
        json je;
        je["speaker_id"] = e.speaker_id;
        je["template_id"] = e.template_id;
        je["template_path"] = e.template_path;
        je["digest"] = e.digest;
        je["enrolled_at"] = e.enrolled_at;
        json feats;
        for (const Method m : kAllMethods)
            feats[method_name(m)] = to_json(e.features[idx(m)]);
        je["features"] = std::move(feats);
        entries.push_back(std::move(je));
    }
    doc["entries"] = std::move(entries);
    json norm;
    for (const Method m : kAllMethods) {
        const MethodStats& st = stats_[idx(m)];
        norm[method_name(m)] = {{"mean", to_json(st.mean)},
                                {"std", to_json(st.stddev)}};
    }
    doc["normalization"] = std::move(norm);

    const std::filesystem::path manifest = dir_ / "manifest.json";
    std::ofstream os(manifest);
    if (!os)
        fail(Err::IoFailure, "cannot open for writing: " + manifest.string());
    os << doc.dump(2) << '\n';
    if (!os)
        fail(Err::IoFailure, "write failed: " + manifest.string());
}

const TemplateEntry& TemplateDB::enroll(const std::string& speaker_id,
                                        const Signal& s, const KeyPair& keys,
                                        double gain, const FrameConfig& cfg) {
    if (speaker_id.empty())
        fail(Err::LabelMissing, "speaker id must not be empty");
    if (!safe_speaker_id(speaker_id))
        fail(Err::BadFormat,
             "speaker id may contain only letters, digits, '-' and '_'");

    const std::string digest = content_digest(s);
    for (const TemplateEntry& e : entries_)
        if (e.speaker_id == speaker_id && e.digest == digest)
            fail(Err::DuplicateTemplate,
                 "identical sample already enrolled for " + speaker_id);

    // All feature extraction happens before anything is written, so a bad
    // signal cannot leave a half-enrolled store behind.
    TemplateEntry entry;
    entry.speaker_id = speaker_id;
    entry.digest = digest;
    entry.enrolled_at = enrollment_timestamp();
    for (const Method m : kAllMethods)
        entry.features[idx(m)] = extract_features(s, m, cfg).values;

    int serial = 0;
    for (const TemplateEntry& e : entries_)
        if (e.speaker_id == speaker_id)
            ++serial;
    std::string template_id;
    do {
        ++serial;
        std::ostringstream os;
        os << speaker_id << '-' << std::setw(3) << std::setfill('0') << serial;
        template_id = os.str();
    } while (std::any_of(entries_.begin(), entries_.end(),
                         [&](const TemplateEntry& e) {
                             return e.template_id == template_id;
                         }));
    entry.template_id = template_id;
    entry.template_path = template_id + ".vcr";

    std::filesystem::create_directories(dir_);
    write_vcr(dir_ / entry.template_path, encrypt(s, keys, gain));
    entries_.push_back(std::move(entry));
    recompute_stats();
    save();
    return entries_.back();
}

double TemplateDB::distance(const FeatureVector& probe,
                            const Eigen::ArrayXd& cached, bool normalized) const {
    if (probe.values.size() != cached.size())
        fail(Err::LengthMismatch, "probe and cached vector lengths differ");
    if (!normalized)
        return std::sqrt((probe.values - cached).square().sum());
    const MethodStats& st = stats_[idx(probe.method)];
    double acc = 0.0;
    for (Eigen::Index d = 0; d < cached.size(); ++d) {
        if (st.stddev[d] <= 0.0)
            continue; // constant dimension carries no information
        const double diff = (probe.values[d] - cached[d]) / st.stddev[d];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

RankedResult TemplateDB::identify_features(const FeatureVector& probe,
                                           bool normalized) const {
    if (entries_.empty())
        fail(Err::EmptyDatabase, "no enrolled templates");

    RankedResult result;
    result.ranking.reserve(entries_.size());
    for (const TemplateEntry& e : entries_)
        result.ranking.push_back(
            {e.speaker_id, e.template_id,
             distance(probe, e.features[idx(probe.method)], normalized)});
    std::sort(result.ranking.begin(), result.ranking.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.distance != b.distance)
                      return a.distance < b.distance;
                  if (a.speaker_id != b.speaker_id)
                      return a.speaker_id < b.speaker_id;
                  return a.template_id < b.template_id;
              });
    result.decision = result.ranking.front().speaker_id;
    return result;
}

RankedResult TemplateDB::identify(const Signal& s, Method m, bool normalized,
                                  const FrameConfig& cfg) const {
    return identify_features(extract_features(s, m, cfg), normalized);
}

std::vector<AccuracyRow> accuracy_bench(const std::filesystem::path& db_dir,
                                        const std::filesystem::path& test_dir,
                                        const std::vector<Method>& methods,
                                        bool normalized, const FrameConfig& cfg) {
    const TemplateDB db = TemplateDB::open(db_dir);

    std::vector<std::pair<std::string, std::filesystem::path>> samples;
    if (std::filesystem::exists(test_dir)) {
        for (const auto& item : std::filesystem::directory_iterator(test_dir)) {
            if (item.is_regular_file() && item.path().extension() == ".wav")
                fail(Err::LabelMissing,
                     "test sample outside a speaker directory: " +
                         item.path().string());
            if (!item.is_directory())
                continue;
            const std::string speaker = item.path().filename().string();
            for (const auto& file : std::filesystem::directory_iterator(item.path()))
                if (file.is_regular_file() && file.path().extension() == ".wav")
                    samples.emplace_back(speaker, file.path());
        }
    }
    if (samples.empty())
        fail(Err::EmptyDataset, "no test samples under " + test_dir.string());
    std::sort(samples.begin(), samples.end());

    std::vector<AccuracyRow> table;
    table.reserve(methods.size());
    for (const Method m : methods) {
        AccuracyRow row;
        row.method = m;
        for (const auto& [speaker, path] : samples) {
            const RankedResult r = db.identify(read_wav(path), m, normalized, cfg);
            ++row.total;
            if (r.decision == speaker)
                ++row.correct;
        }
        row.accuracy_pct = 100.0 * row.correct / row.total;
        table.push_back(row);
    }
    std::sort(table.begin(), table.end(),
              [](const AccuracyRow& a, const AccuracyRow& b) {
                  if (a.accuracy_pct != b.accuracy_pct)
                      return a.accuracy_pct > b.accuracy_pct;
                  return std::string(method_name(a.method)) < method_name(b.method);
              });
    return table;
}

} // namespace vcry
