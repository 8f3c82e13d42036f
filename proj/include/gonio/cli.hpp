#pragma once

#include "gonio/feature_store.hpp"
#include "gonio/framing.hpp"
#include "gonio/som.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gonio {

/// Pipeline parameters. Defaults are the analysis settings of the study:
/// 22050 Hz, 2048-sample frames, at most 500 centered frames, 23 x 23 SOM.
struct RunConfig {
    FrameSpec frames;
    std::uint32_t target_rate = 22050;
    SomConfig som;
};

struct SongAnalysis {
    std::vector<FrameRecord> frames;
    SongFeatures song;
};

/// decode -> resample -> frame -> features -> aggregate for one WAV file.
SongAnalysis analyze_file(const std::filesystem::path& path, const RunConfig& config);

/// Expands directories to the .wav files they contain (sorted) and keeps
/// file arguments in the order given.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& args);

/// Entry point of the `gonio` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on internal errors, 2 on usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gonio
