// Monte Carlo BLER sweeps over the full encode/transmit/decode chain.
//
// The frame loop is the data-parallel kernel of this library. It exists in
// two forms sharing the same per-frame code: a serial reference and an
// OpenMP-parallel version. Frames draw from streams keyed by frame index and
// early stopping is decided only at fixed chunk boundaries, so both forms
// count exactly the same frames and errors for a given (config, seed).

#pragma once

#include <iosfwd>
#include <string>

#include "polar/channel.hpp"
#include "polar/decoder.hpp"

namespace polar {

struct SimConfig {
  std::uint32_t n_tx = 0;
  std::uint32_t k = 0;  // includes the CRC bits
  SchemeId scheme = SchemeId::proposed_punctured;
  int crc_len = 24;    // 0 disables the CRC and selects the rank-1 path
  int list_size = 32;
  std::vector<double> snr_grid_db;
  SnrConvention snr_convention = SnrConvention::es_n0;
  std::uint64_t max_frames = 100000;
  std::uint64_t max_errors = 100;
  std::uint64_t seed = 1;
  CombineMode combine_mode = CombineMode::minsum;
  double design_snr_db = 2.0;

  void validate() const;  // throws ConfigError
};

struct BlerPoint {
  double snr_db = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t frame_errors = 0;
  std::uint64_t crc_failures = 0;
  double bler = 0.0;
  double elapsed_s = 0.0;
};

enum class ExecPolicy { serial, parallel };

// Frames per early-stop check; both execution policies use the same value.
inline constexpr std::uint64_t kFrameChunk = 256;

struct FrameOutcome {
  bool frame_error = false;
  bool crc_failure = false;
};

// One full frame: payload -> CRC -> encode -> rate match -> QPSK -> AWGN ->
// LLRs -> rate recovery -> list decode. An error is a CRC failure or a
// decoded payload differing from the transmitted one.
FrameOutcome run_frame(const CodeSpec& spec, const SimConfig& cfg, const NoiseSpec& noise,
                       std::uint64_t point_key, std::uint64_t frame_index);

BlerPoint run_point(const SimConfig& cfg, double snr_db, ExecPolicy policy = ExecPolicy::parallel);

// Runs every grid point; when csv is non-null the header and one row per
// point are streamed to it as results arrive.
std::vector<BlerPoint> run_sweep(const SimConfig& cfg, std::ostream* csv = nullptr,
                                 ExecPolicy policy = ExecPolicy::parallel);

struct CsvRow {
  std::string scheme;
  std::uint32_t n_tx = 0;
  std::uint32_t k = 0;
  int crc_len = 0;
  int list_size = 0;
  std::string snr_convention;
  std::uint64_t seed = 0;
  BlerPoint point;
};

extern const char* const kCsvHeader;

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SimConfig& cfg, const BlerPoint& point);
void write_csv(std::ostream& out, const SimConfig& cfg, const std::vector<BlerPoint>& points);
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace polar
