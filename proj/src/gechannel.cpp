#include "gesim/gechannel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gesim/bounds.hpp"
#include "gesim/error.hpp"

namespace gesim {

double default_p_good(double ebn0_db) {
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  return q_function(std::sqrt(2.0 * ebn0));
}

void ChannelParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid channel parameters: " + what); };
  if (!(mu > 0.0 && mu < 1.0)) fail("mu must lie in (0, 1), got " + std::to_string(mu));
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  if (!(p_good >= 0.0 && p_good < p_bad && p_bad < 0.5)) {
    fail("need 0 <= p_good < p_bad < 0.5, got p_good=" + std::to_string(p_good) +
         " p_bad=" + std::to_string(p_bad));
  }
}

double steady_state(const ChannelParams& params) { return params.mu / (params.mu + params.epsilon); }

CsiMatrix::CsiMatrix(std::size_t n_sensors, std::size_t n_bits)
    : n_bits_(n_bits), rows_(n_sensors, BitVector(n_bits)) {}

CsiMatrix::CsiMatrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ArgumentError("CSI matrix needs at least one row");
  n_bits_ = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != n_bits_) throw ArgumentError("CSI rows must all have the same length");
  }
}

BitVector generate_states(const ChannelParams& params, std::size_t n_bits, SplitMix64& gen) {
  BitVector states(n_bits);
  if (n_bits == 0) return states;
  bool good = uniform01(gen) < steady_state(params);
  states.set(0, good);
  for (std::size_t m = 1; m < n_bits; ++m) {
    const double u = uniform01(gen);
    good = good ? (u >= params.epsilon) : (u < params.mu);
    if (good) states.set(m);
  }
  return states;
}

CsiMatrix generate_csi(std::span<const ChannelParams> params, std::size_t n_bits, std::uint64_t seed) {
  if (params.empty()) throw ConfigError("generate_csi needs at least one sensor");
  if (n_bits == 0) throw ConfigError("generate_csi needs at least one bit");
  std::vector<BitVector> rows;
  rows.reserve(params.size());
  for (std::size_t n = 0; n < params.size(); ++n) {
    params[n].validate();
    SplitMix64 gen(derive_seed(seed, n));
    rows.push_back(generate_states(params[n], n_bits, gen));
  }
  return CsiMatrix(std::move(rows));
}

BitVector transmit(const BitVector& source, const BitVector& states, const ChannelParams& params, SplitMix64& gen) {
  if (source.size() != states.size()) throw ArgumentError("transmit: source and state lengths differ");
  BitVector out = source;
  for (std::size_t m = 0; m < source.size(); ++m) {
    const double p = states.test(m) ? params.p_good : params.p_bad;
    if (uniform01(gen) < p) out.flip(m);
  }
  return out;
}

BitVector transmit(const BitVector& source, const BitVector& states, const ChannelParams& params,
                   std::uint64_t seed) {
  SplitMix64 gen(seed);
  return transmit(source, states, params, gen);
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw ArgumentError("CSI stream truncated in header");
  return std::uint32_t{bytes[0]} | (std::uint32_t{bytes[1]} << 8) | (std::uint32_t{bytes[2]} << 16) |
         (std::uint32_t{bytes[3]} << 24);
}

}  // namespace

void write_csi_binary(std::ostream& out, const CsiMatrix& csi) {
  put_u32(out, static_cast<std::uint32_t>(csi.n_sensors()));
  put_u32(out, static_cast<std::uint32_t>(csi.n_bits()));
  for (const auto& row : csi.rows()) {
    const auto bytes = pack_bytes_msb_first(row);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
}

CsiMatrix read_csi_binary(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  const std::uint32_t m = get_u32(in);
  if (n == 0 || m == 0) throw ArgumentError("CSI stream declares an empty matrix");
  std::vector<BitVector> rows;
  rows.reserve(n);
  std::vector<std::uint8_t> buffer((m + 7) / 8);
  for (std::uint32_t r = 0; r < n; ++r) {
    if (!in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()))) {
      throw ArgumentError("CSI stream truncated in row data");
    }
    rows.push_back(unpack_bytes_msb_first(buffer, m));
  }
  return CsiMatrix(std::move(rows));
}

std::string to_ascii_art(const CsiMatrix& csi) {
  std::ostringstream out;
  for (const auto& row : csi.rows()) out << row.to_string('#', '.') << '\n';
  return out.str();
}

}  // namespace gesim
