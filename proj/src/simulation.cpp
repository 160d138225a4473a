#include "polar/simulation.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polar {

namespace {

std::uint64_t snr_point_key(double snr_db) {
  return static_cast<std::uint64_t>(std::llround(snr_db * 1000.0));
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

void SimConfig::validate() const {
  if (n_tx == 0 || k == 0 || k > n_tx) throw ConfigError("SimConfig: need 0 < K <= N");
  if (crc_len != 0 && crc_len != 8 && crc_len != 16 && crc_len != 24)
    throw ConfigError("SimConfig: CRC length must be 0, 8, 16 or 24");
  if (k <= static_cast<std::uint32_t>(crc_len)) throw ConfigError("SimConfig: K must exceed the CRC length");
  if (list_size < 1) throw ConfigError("SimConfig: list size must be >= 1");
  if (snr_grid_db.empty()) throw ConfigError("SimConfig: SNR grid is empty");
  if (max_frames < 1) throw ConfigError("SimConfig: max_frames must be >= 1");
}

FrameOutcome run_frame(const CodeSpec& spec, const SimConfig& cfg, const NoiseSpec& noise,
                       std::uint64_t point_key, std::uint64_t frame_index) {
  FrameRng rng(cfg.seed, point_key, frame_index);

  const std::size_t payload_len = cfg.k - static_cast<std::uint32_t>(cfg.crc_len);
  BitVector payload(payload_len);
  for (Bit& b : payload) b = rng.next_bit();

  BitVector word = payload;
  if (cfg.crc_len > 0) {
    const BitVector crc = crc_compute(payload, cfg.crc_len);
    word.insert(word.end(), crc.begin(), crc.end());
  }

  const BitVector codeword = encode(spec, word);
  const BitVector transmitted = rate_match(codeword, spec);
  SymbolBlock block = modulate(transmitted);
  add_noise(block, noise, rng);
  const LlrVector channel_llrs = demodulate(block, noise);
  const LlrVector full_llrs = rate_recover(channel_llrs, spec);
  const DecodeResult result =
      ca_scl_decode(spec, full_llrs, cfg.list_size, cfg.crc_len, cfg.combine_mode);

  FrameOutcome outcome;
  outcome.crc_failure = result.status == DecodeStatus::crc_failure;
  outcome.frame_error = outcome.crc_failure || *result.payload != payload;
  return outcome;
}

BlerPoint run_point(const SimConfig& cfg, double snr_db, ExecPolicy policy) {
  cfg.validate();
  const CodeSpec spec = design_code(cfg.n_tx, cfg.k, cfg.scheme, {cfg.design_snr_db});
  const double rate = static_cast<double>(cfg.k) / cfg.n_tx;
  const NoiseSpec noise =
      NoiseSpec::from_es_n0_db(es_n0_db_from(cfg.snr_convention, snr_db, rate));
  const std::uint64_t point_key = snr_point_key(snr_db);

  const auto start = std::chrono::steady_clock::now();
  std::uint64_t frames = 0, errors = 0, crc_failures = 0;
  while (frames < cfg.max_frames && errors < cfg.max_errors) {
    const std::int64_t chunk =
        static_cast<std::int64_t>(std::min(kFrameChunk, cfg.max_frames - frames));
    std::int64_t chunk_errors = 0, chunk_crc = 0;
    if (policy == ExecPolicy::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : chunk_errors, chunk_crc)
#endif
      for (std::int64_t i = 0; i < chunk; ++i) {
        const FrameOutcome out = run_frame(spec, cfg, noise, point_key, frames + i);
        chunk_errors += out.frame_error;
        chunk_crc += out.crc_failure;
      }
    } else {
      for (std::int64_t i = 0; i < chunk; ++i) {
        const FrameOutcome out = run_frame(spec, cfg, noise, point_key, frames + i);
        chunk_errors += out.frame_error;
        chunk_crc += out.crc_failure;
      }
    }
    frames += static_cast<std::uint64_t>(chunk);
    errors += static_cast<std::uint64_t>(chunk_errors);
    crc_failures += static_cast<std::uint64_t>(chunk_crc);
  }

  BlerPoint point;
  point.snr_db = snr_db;
  point.frames = frames;
  point.frame_errors = errors;
  point.crc_failures = crc_failures;
  point.bler = frames ? static_cast<double>(errors) / static_cast<double>(frames) : 0.0;
  point.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return point;
}

std::vector<BlerPoint> run_sweep(const SimConfig& cfg, std::ostream* csv, ExecPolicy policy) {
  cfg.validate();
  if (csv) write_csv_header(*csv);
  std::vector<BlerPoint> points;
  points.reserve(cfg.snr_grid_db.size());
  for (double snr : cfg.snr_grid_db) {
    points.push_back(run_point(cfg, snr, policy));
    if (csv) {
      write_csv_row(*csv, cfg, points.back());
      csv->flush();
    }
  }
  return points;
}

const char* const kCsvHeader =
    "scheme,N,K,crc_len,L,snr_convention,snr_db,frames,frame_errors,crc_failures,bler,seed";

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const SimConfig& cfg, const BlerPoint& point) {
  out << to_string(cfg.scheme) << ',' << cfg.n_tx << ',' << cfg.k << ',' << cfg.crc_len << ','
      << cfg.list_size << ',' << to_string(cfg.snr_convention) << ','
      << format_double(point.snr_db) << ',' << point.frames << ',' << point.frame_errors << ','
      << point.crc_failures << ',' << format_double(point.bler) << ',' << cfg.seed << '\n';
}

void write_csv(std::ostream& out, const SimConfig& cfg, const std::vector<BlerPoint>& points) {
  write_csv_header(out);
  for (const BlerPoint& p : points) write_csv_row(out, cfg, p);
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == kCsvHeader) continue;  // header is optional when reading
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 12) throw ConfigError("bad CSV row: " + line);
    CsvRow row;
    row.scheme = fields[0];
    row.n_tx = static_cast<std::uint32_t>(std::stoul(fields[1]));
    row.k = static_cast<std::uint32_t>(std::stoul(fields[2]));
    row.crc_len = std::stoi(fields[3]);
    row.list_size = std::stoi(fields[4]);
    row.snr_convention = fields[5];
    row.point.snr_db = std::stod(fields[6]);
    row.point.frames = std::stoull(fields[7]);
    row.point.frame_errors = std::stoull(fields[8]);
    row.point.crc_failures = std::stoull(fields[9]);
    row.point.bler = std::stod(fields[10]);
    row.seed = std::stoull(fields[11]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace polar
