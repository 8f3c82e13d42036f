#include "gonio/feature_store.hpp"

#include "gonio/csv.hpp"
#include "gonio/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gonio {

namespace {

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> xs)
{
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

struct Moments {
    double mean;
    double stddev;
};

Moments population_moments(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    // Summing offsets from the median keeps a constant column exact.
    const double ref = xs[xs.size() / 2];
    std::vector<double> offsets(xs.size());
    std::transform(xs.begin(), xs.end(), offsets.begin(), [ref](double x) { return x - ref; });
    const double mean = ref + compensated_sum(offsets) / n;
    std::vector<double> sq(xs.size());
    std::transform(xs.begin(), xs.end(), sq.begin(), [mean](double x) { return (x - mean) * (x - mean); });
    std::sort(sq.begin(), sq.end());
    return {mean, std::sqrt(compensated_sum(sq) / n)};
}

std::string bool_field(bool b) { return b ? "true" : "false"; }

bool parse_bool(std::string_view s, bool& out)
{
    if (s == "true" || s == "1") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0") {
        out = false;
        return true;
    }
    return false;
}

void check_source_id(const std::string& id)
{
    if (id.empty())
        throw std::invalid_argument("source_id must be non-empty");
}

std::string join_header(const std::vector<std::string>& fields)
{
    std::string h;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            h += ',';
        h += fields[i];
    }
    return h;
}

void expect_header(std::istream& in, std::size_t& line, const char* header)
{
    std::vector<std::string> fields;
    if (!csv::read_record(in, fields, line))
        throw SchemaMismatch(std::string("empty file, expected header '") + header + "'");
    const std::string got = join_header(fields);
    if (got != header)
        throw SchemaMismatch("header '" + got + "' does not match '" + header + "'");
}

double number(const std::vector<std::string>& f, std::size_t i, std::size_t line)
{
    double v = 0.0;
    if (!csv::parse_double(f[i], v))
        throw MalformedRow(line, "field " + std::to_string(i + 1) + " '" + f[i] + "' is not a finite number");
    return v;
}

std::size_t count(const std::vector<std::string>& f, std::size_t i, std::size_t line)
{
    std::size_t v = 0;
    if (!csv::parse_size(f[i], v))
        throw MalformedRow(line, "field " + std::to_string(i + 1) + " '" + f[i] + "' is not a count");
    return v;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    return out;
}

} // namespace

SongFeatures aggregate(std::span<const FrameFeatures> features, std::string source_id)
{
    if (features.empty())
        throw EmptyInput("aggregate: no frames for '" + source_id + "'");

    std::vector<double> ps, cc;
    ps.reserve(features.size());
    cc.reserve(features.size());
    std::size_t degenerate = 0;
    for (const auto& f : features) {
        ps.push_back(f.phase_scope);
        cc.push_back(f.channel_correlation);
        degenerate += f.degenerate_correlation ? 1 : 0;
    }
    const Moments mp = population_moments(std::move(ps));
    const Moments mc = population_moments(std::move(cc));

    SongFeatures s;
    s.source_id = std::move(source_id);
    s.mean_phase_scope = mp.mean;
    s.std_phase_scope = mp.stddev;
    s.mean_channel_correlation = std::clamp(mc.mean, -1.0, 1.0);
    s.std_channel_correlation = mc.stddev;
    s.frame_count = features.size();
    s.degenerate_frames = degenerate;
    return s;
}

std::vector<FrameRecord> to_records(std::span<const FrameFeatures> features, const std::string& source_id)
{
    std::vector<FrameRecord> rows;
    rows.reserve(features.size());
    for (const auto& f : features)
        rows.push_back({source_id, f.frame_index, f.phase_scope, f.channel_correlation, f.degenerate_correlation});
    return rows;
}

void write_csv(std::ostream& out, const FeatureTable& table)
{
    if (table.kind() == SchemaKind::PerFrame) {
        out << kPerFrameHeader << '\n';
        for (const auto& r : table.frames()) {
            check_source_id(r.source_id);
            csv::write_record(out, {r.source_id, std::to_string(r.frame_index), csv::format_double(r.phase_scope),
                                    csv::format_double(r.channel_correlation), bool_field(r.degenerate)});
        }
    } else {
        out << kPerSongHeader << '\n';
        for (const auto& s : table.songs()) {
            check_source_id(s.source_id);
            csv::write_record(out, {s.source_id, csv::format_double(s.mean_phase_scope),
                                    csv::format_double(s.mean_channel_correlation),
                                    csv::format_double(s.std_phase_scope),
                                    csv::format_double(s.std_channel_correlation), std::to_string(s.frame_count),
                                    std::to_string(s.degenerate_frames)});
        }
    }
}

void write_csv(const std::filesystem::path& path, const FeatureTable& table)
{
    // Render first so a validation failure leaves no partial file behind.
    std::ostringstream buf;
    write_csv(buf, table);
    auto out = open_out(path);
    out << buf.str();
}

FeatureTable read_csv(std::istream& in, SchemaKind kind)
{
    std::size_t line = 0;
    std::vector<std::string> f;
    if (kind == SchemaKind::PerFrame) {
        expect_header(in, line, kPerFrameHeader);
        std::vector<FrameRecord> rows;
        while (csv::read_record(in, f, line)) {
            if (f.size() == 1 && f[0].empty())
                continue;
            if (f.size() != 5)
                throw MalformedRow(line, "expected 5 fields, got " + std::to_string(f.size()));
            FrameRecord r;
            r.source_id = f[0];
            if (r.source_id.empty())
                throw MalformedRow(line, "empty source_id");
            r.frame_index = count(f, 1, line);
            r.phase_scope = number(f, 2, line);
            r.channel_correlation = number(f, 3, line);
            if (!parse_bool(f[4], r.degenerate))
                throw MalformedRow(line, "degenerate field '" + f[4] + "' is not a boolean");
            rows.push_back(std::move(r));
        }
        return FeatureTable::per_frame(std::move(rows));
    }

    expect_header(in, line, kPerSongHeader);
    std::vector<SongFeatures> rows;
    while (csv::read_record(in, f, line)) {
        if (f.size() == 1 && f[0].empty())
            continue;
        if (f.size() != 7)
            throw MalformedRow(line, "expected 7 fields, got " + std::to_string(f.size()));
        SongFeatures s;
        s.source_id = f[0];
        if (s.source_id.empty())
            throw MalformedRow(line, "empty source_id");
        s.mean_phase_scope = number(f, 1, line);
        s.mean_channel_correlation = number(f, 2, line);
        s.std_phase_scope = number(f, 3, line);
        s.std_channel_correlation = number(f, 4, line);
        s.frame_count = count(f, 5, line);
        s.degenerate_frames = count(f, 6, line);
        rows.push_back(std::move(s));
    }
    return FeatureTable::per_song(std::move(rows));
}

FeatureTable read_csv(const std::filesystem::path& path, SchemaKind kind)
{
    auto in = open_in(path);
    return read_csv(in, kind);
}

LabelMap read_labels(std::istream& in)
{
    std::size_t line = 0;
    expect_header(in, line, kLabelsHeader);
    LabelMap labels;
    std::vector<std::string> f;
    while (csv::read_record(in, f, line)) {
        if (f.size() == 1 && f[0].empty())
            continue;
        if (f.size() != 2)
            throw MalformedRow(line, "expected 2 fields, got " + std::to_string(f.size()));
        if (f[0].empty())
            throw MalformedRow(line, "empty source_id");
        labels[f[0]] = f[1];
    }
    return labels;
}

LabelMap read_labels(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_labels(in);
}

void write_labels(std::ostream& out, const LabelMap& labels)
{
    out << kLabelsHeader << '\n';
    for (const auto& [id, cls] : labels)
        csv::write_record(out, {id, cls});
}

} // namespace gonio
