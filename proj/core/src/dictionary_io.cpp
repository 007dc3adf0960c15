#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "nocs/ids.hpp"
#include "text_util.hpp"

namespace nocs {

namespace {

constexpr std::string_view kDictionaryFormat = "nocs-dictionary-1";
constexpr std::string_view kReportFormat = "nocs-report-1";
constexpr std::string_view kReportHeader = "x,y,window_start,cluster,delta,threshold,anomalous";

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open " + path.string());
    return in;
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

/// Collected `# key=value` block with the line each key came from.
class MetaBlock {
public:
    void add(std::string key, std::string value, std::size_t line) {
        if (values_.count(key)) throw ParseError(line, "duplicate metadata key '" + key + "'");
        values_[key] = {std::move(value), line};
    }

    const std::string& text(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ParseError(0, "missing metadata key '" + key + "'");
        used_.push_back(key);
        return it->second.first;
    }

    template <typename Int>
    Int integer(const std::string& key) const {
        const auto& v = text(key);
        auto parsed = detail::parse_int<Int>(v);
        if (!parsed) throw ParseError(line(key), "metadata '" + key + "' is not an integer: " + v);
        return *parsed;
    }

    double real(const std::string& key) const {
        const auto& v = text(key);
        auto parsed = detail::parse_double(v);
        if (!parsed) throw ParseError(line(key), "metadata '" + key + "' is not a number: " + v);
        return *parsed;
    }

    std::size_t line(const std::string& key) const {
        auto it = values_.find(key);
        return it == values_.end() ? 0 : it->second.second;
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : values_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                throw ParseError(entry.second, "unknown metadata key '" + key + "'");
            }
        }
    }

private:
    std::map<std::string, std::pair<std::string, std::size_t>> values_;
    mutable std::vector<std::string> used_;
};

/// Reads the leading metadata block; returns the first non-comment line
/// (empty string with `more` = false at end of input).
MetaBlock read_meta(detail::LineReader& reader, std::string& first, bool& more) {
    MetaBlock meta;
    more = false;
    while (reader.next(first)) {
        if (first.empty()) continue;
        if (first.front() != '#') {
            more = true;
            break;
        }
        auto kv = detail::parse_meta_line(first);
        if (!kv) throw ParseError(reader.line_no(), "malformed metadata line");
        meta.add(kv->first, kv->second, reader.line_no());
    }
    return meta;
}

template <typename T, typename F>
T with_line(std::size_t line, F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw ParseError(line, e.what());
    }
}

std::vector<double> parse_values(std::string_view line, std::size_t line_no, std::size_t expected) {
    const auto fields = detail::split(line, ',');
    if (fields.size() != expected) {
        throw ParseError(line_no, "expected " + std::to_string(expected) + " values, found " +
                                      std::to_string(fields.size()));
    }
    std::vector<double> out;
    out.reserve(expected);
    for (auto f : fields) {
        auto v = detail::parse_double(f);
        if (!v || !std::isfinite(*v)) throw ParseError(line_no, "not a finite number: '" + std::string(f) + "'");
        out.push_back(*v);
    }
    return out;
}

}  // namespace

void write_dictionary(const ShapeDictionary& d, std::ostream& out) {
    out << "# format=" << kDictionaryFormat << '\n'
        << "# w=" << d.spec.width << '\n'
        << "# s=" << d.spec.stride << '\n'
        << "# normalization=" << normalization_name(d.spec.normalization) << '\n'
        << "# metric=" << d.metric.name() << '\n'
        << "# algorithm=" << algorithm_name(d.algorithm) << '\n'
        << "# linkage=" << linkage_name(d.linkage) << '\n'
        << "# k=" << d.k << '\n'
        << "# seed=" << d.seed << '\n'
        << "# percentile=" << detail::format_double(d.percentile) << '\n'
        << "# floor=" << detail::format_double(d.floor) << '\n'
        << "# mesh_width=" << d.dims.width << '\n'
        << "# mesh_height=" << d.dims.height << '\n'
        << "# fingerprint=" << one_line(d.fingerprint) << '\n';
    for (const auto& center : d.centers) {
        for (std::size_t t = 0; t < center.size(); ++t) {
            if (t) out << ',';
            out << detail::format_double(center[t]);
        }
        out << '\n';
    }
    for (int r = 0; r < d.dims.routers(); ++r) {
        const auto c = d.dims.at(r);
        out << c.x << ',' << c.y << ',' << detail::format_double(d.thresholds.at(static_cast<std::size_t>(r)))
            << '\n';
    }
}

void write_dictionary(const ShapeDictionary& dict, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_dictionary(dict, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

ShapeDictionary read_dictionary(std::istream& in) {
    detail::LineReader reader(in);
    std::string line;
    bool more = false;
    const auto meta = read_meta(reader, line, more);
    if (meta.text("format") != kDictionaryFormat) {
        throw ParseError(meta.line("format"), "not a dictionary file (format " + meta.text("format") + ")");
    }

    ShapeDictionary d;
    d.spec.width = meta.integer<int>("w");
    d.spec.stride = meta.integer<int>("s");
    d.spec.normalization =
        with_line<Normalization>(meta.line("normalization"), [&] { return parse_normalization(meta.text("normalization")); });
    with_line<int>(meta.line("w"), [&] {
        d.spec.validate();
        return 0;
    });
    d.metric = with_line<Metric>(meta.line("metric"), [&] { return Metric::parse(meta.text("metric")); });
    d.algorithm = with_line<Algorithm>(meta.line("algorithm"), [&] { return parse_algorithm(meta.text("algorithm")); });
    d.linkage = with_line<Linkage>(meta.line("linkage"), [&] { return parse_linkage(meta.text("linkage")); });
    d.k = meta.integer<int>("k");
    if (d.k < 1) throw ParseError(meta.line("k"), "k must be >= 1");
    d.seed = meta.integer<std::uint64_t>("seed");
    d.percentile = meta.real("percentile");
    d.floor = meta.real("floor");
    d.dims.width = meta.integer<int>("mesh_width");
    d.dims.height = meta.integer<int>("mesh_height");
    if (d.dims.width < 1 || d.dims.height < 1) throw ParseError(meta.line("mesh_width"), "mesh dimensions must be >= 1");
    d.fingerprint = meta.text("fingerprint");
    meta.reject_unknown();

    auto next_line = [&](const char* what) {
        if (more) {
            more = false;
            return;
        }
        do {
            if (!reader.next(line)) throw ParseError(reader.line_no(), std::string("file ends before ") + what);
        } while (line.empty());
    };

    for (int c = 0; c < d.k; ++c) {
        next_line("all centers were read");
        d.centers.push_back(parse_values(line, reader.line_no(), static_cast<std::size_t>(d.spec.width)));
    }
    d.thresholds.resize(static_cast<std::size_t>(d.dims.routers()));
    for (int r = 0; r < d.dims.routers(); ++r) {
        next_line("all thresholds were read");
        const auto fields = detail::split(line, ',');
        if (fields.size() != 3) throw ParseError(reader.line_no(), "threshold line must be x,y,h");
        const auto x = detail::parse_int<int>(fields[0]);
        const auto y = detail::parse_int<int>(fields[1]);
        const auto h = detail::parse_double(fields[2]);
        const auto expect = d.dims.at(r);
        if (!x || !y || *x != expect.x || *y != expect.y) {
            throw ParseError(reader.line_no(), "expected threshold for router " + to_string(expect));
        }
        if (!h || !std::isfinite(*h) || *h < 0.0) throw ParseError(reader.line_no(), "threshold must be finite and >= 0");
        d.thresholds[static_cast<std::size_t>(r)] = *h;
    }
    while (reader.next(line)) {
        if (!detail::trim(line).empty()) throw ParseError(reader.line_no(), "unexpected content after thresholds");
    }
    return d;
}

ShapeDictionary read_dictionary(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_dictionary(in);
}

void write_report(const DetectionReport& report, std::ostream& out) {
    out << "# format=" << kReportFormat << '\n'
        << "# mesh_width=" << report.dims.width << '\n'
        << "# mesh_height=" << report.dims.height << '\n'
        << "# window=" << report.spec.width << '\n'
        << "# stride=" << report.spec.stride << '\n'
        << "# normalization=" << normalization_name(report.spec.normalization) << '\n'
        << "# quanta=" << report.quanta << '\n'
        << "# windows=" << report.records.size() << '\n'
        << "# anomalies=" << report.anomalies() << '\n'
        << kReportHeader << '\n';
    for (const auto& r : report.records) {
        out << r.router.x << ',' << r.router.y << ',' << r.window_start << ',' << r.cluster << ','
            << detail::format_double(r.delta) << ',' << detail::format_double(r.threshold) << ','
            << (r.anomalous ? 1 : 0) << '\n';
    }
}

void write_report(const DetectionReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_report(report, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

DetectionReport read_report(std::istream& in) {
    detail::LineReader reader(in);
    std::string line;
    bool more = false;
    const auto meta = read_meta(reader, line, more);
    if (meta.text("format") != kReportFormat) {
        throw ParseError(meta.line("format"), "not a report file (format " + meta.text("format") + ")");
    }
    DetectionReport report;
    report.dims.width = meta.integer<int>("mesh_width");
    report.dims.height = meta.integer<int>("mesh_height");
    report.spec.width = meta.integer<int>("window");
    report.spec.stride = meta.integer<int>("stride");
    report.spec.normalization = with_line<Normalization>(
        meta.line("normalization"), [&] { return parse_normalization(meta.text("normalization")); });
    report.quanta = meta.integer<int>("quanta");
    const auto windows = meta.integer<std::size_t>("windows");
    const auto anomalies = meta.integer<std::size_t>("anomalies");
    meta.reject_unknown();
    if (report.dims.width < 1 || report.dims.height < 1) throw ParseError(meta.line("mesh_width"), "bad mesh size");

    if (!more || detail::trim(line) != kReportHeader) {
        throw ParseError(reader.line_no(), "expected header '" + std::string(kReportHeader) + "'");
    }
    while (reader.next(line)) {
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line, ',');
        if (f.size() != 7) throw ParseError(reader.line_no(), "expected 7 fields");
        const auto x = detail::parse_int<int>(f[0]);
        const auto y = detail::parse_int<int>(f[1]);
        const auto start = detail::parse_int<int>(f[2]);
        const auto cluster = detail::parse_int<int>(f[3]);
        const auto delta = detail::parse_double(f[4]);
        const auto h = detail::parse_double(f[5]);
        const auto flag = detail::parse_int<int>(f[6]);
        if (!x || !y || !start || !cluster || !delta || !h || !flag || (*flag != 0 && *flag != 1)) {
            throw ParseError(reader.line_no(), "malformed report row");
        }
        ReconstructionRecord rec;
        rec.router = {*x, *y};
        if (!report.dims.contains(rec.router)) throw ParseError(reader.line_no(), "router outside mesh");
        rec.window_start = *start;
        rec.cluster = *cluster;
        rec.delta = *delta;
        rec.threshold = *h;
        rec.anomalous = *flag == 1;
        if (rec.anomalous != (rec.delta > rec.threshold)) {
            throw ParseError(reader.line_no(), "anomalous flag disagrees with delta > threshold");
        }
        report.records.push_back(std::move(rec));
    }
    if (report.records.size() != windows) {
        throw ParseError(reader.line_no(), "expected " + std::to_string(windows) + " rows, found " +
                                               std::to_string(report.records.size()));
    }
    if (report.anomalies() != anomalies) throw ParseError(meta.line("anomalies"), "anomaly count disagrees with rows");
    return report;
}

DetectionReport read_report(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_report(in);
}

void write_residuals(const ReconstructionRecord& record, std::ostream& out) {
    out << "quantum_offset,x_value,x_prime_value,residual\n";
    const auto n = std::min(record.x.size(), record.x_prime.size());
    for (std::size_t t = 0; t < n; ++t) {
        out << t << ',' << detail::format_double(record.x[t]) << ',' << detail::format_double(record.x_prime[t])
            << ',' << detail::format_double(record.x[t] - record.x_prime[t]) << '\n';
    }
}

}  // namespace nocs
