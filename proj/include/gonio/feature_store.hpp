#pragma once

#include "gonio/features.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gonio {

/// Per-song summary over all analyzed frames. Standard deviations are
/// population (divide by n) values.
struct SongFeatures {
    std::string source_id;
    double mean_phase_scope = 0.0;
    double mean_channel_correlation = 0.0;
    double std_phase_scope = 0.0;
    double std_channel_correlation = 0.0;
    std::size_t frame_count = 0;
    std::size_t degenerate_frames = 0;

    friend bool operator==(const SongFeatures&, const SongFeatures&) = default;
};

/// One row of the per-frame table.
struct FrameRecord {
    std::string source_id;
    std::size_t frame_index = 0;
    double phase_scope = 0.0;
    double channel_correlation = 0.0;
    bool degenerate = false;

    friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

enum class SchemaKind { PerFrame, PerSong };

inline constexpr const char* kPerFrameHeader = "source_id,frame_index,phase_scope,channel_correlation,degenerate";
inline constexpr const char* kPerSongHeader =
    "source_id,mean_phase_scope,mean_channel_correlation,std_phase_scope,std_channel_correlation,frame_count,"
    "degenerate_frames";

/// Rows of exactly one schema; the variant alternative is the schema.
struct FeatureTable {
    std::variant<std::vector<FrameRecord>, std::vector<SongFeatures>> rows;

    static FeatureTable per_frame(std::vector<FrameRecord> r = {}) { return {std::move(r)}; }
    static FeatureTable per_song(std::vector<SongFeatures> r = {}) { return {std::move(r)}; }

    SchemaKind kind() const noexcept { return rows.index() == 0 ? SchemaKind::PerFrame : SchemaKind::PerSong; }
    const std::vector<FrameRecord>& frames() const { return std::get<0>(rows); }
    const std::vector<SongFeatures>& songs() const { return std::get<1>(rows); }
    std::vector<FrameRecord>& frames() { return std::get<0>(rows); }
    std::vector<SongFeatures>& songs() { return std::get<1>(rows); }
    std::size_t size() const
    {
        return std::visit([](const auto& v) { return v.size(); }, rows);
    }

    friend bool operator==(const FeatureTable&, const FeatureTable&) = default;
};

/// Means and population standard deviations over every frame; degenerate
/// correlations contribute their value 0 and are counted separately.
/// Summation runs over sorted values, so the result does not depend on the
/// frame order. Throws EmptyInput on an empty sequence.
SongFeatures aggregate(std::span<const FrameFeatures> features, std::string source_id);

std::vector<FrameRecord> to_records(std::span<const FrameFeatures> features, const std::string& source_id);

void write_csv(std::ostream& out, const FeatureTable& table);
void write_csv(const std::filesystem::path& path, const FeatureTable& table);

/// Throws SchemaMismatch on a wrong header and MalformedRow on bad rows.
FeatureTable read_csv(std::istream& in, SchemaKind kind);
FeatureTable read_csv(const std::filesystem::path& path, SchemaKind kind);

/// Class labels keyed by source_id, stored as `source_id,class`.
using LabelMap = std::map<std::string, std::string>;
inline constexpr const char* kLabelsHeader = "source_id,class";

LabelMap read_labels(std::istream& in);
LabelMap read_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const LabelMap& labels);

} // namespace gonio
