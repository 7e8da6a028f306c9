#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "plab/cli.hpp"

namespace plab::cli {

namespace {

constexpr std::array<char, 6> kMagic = {'P', 'L', 'A', 'B', '1', '\0'};

template <class T>
void put_le(unsigned char* dst, T v) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = raw[sizeof(T) - 1 - i];
  else
    std::memcpy(dst, raw, sizeof(T));
}

template <class T>
T get_le(const unsigned char* src) {
  unsigned char raw[sizeof(T)];
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T); ++i) raw[i] = src[sizeof(T) - 1 - i];
  else
    std::memcpy(raw, src, sizeof(T));
  T v;
  std::memcpy(&v, raw, sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const PeriodicField& field, double t) {
  std::array<unsigned char, 64> head{};
  std::memcpy(head.data(), kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(head.data() + 6, static_cast<std::uint16_t>(field.components()));
  put_le<std::uint64_t>(head.data() + 8, field.n());
  put_le<std::uint64_t>(head.data() + 16, field.dims() == 1 ? 1 : field.n());
  put_le<double>(head.data() + 24, field.length());
  put_le<double>(head.data() + 32, t);
  put_le<std::uint64_t>(head.data() + 40, static_cast<std::uint64_t>(field.dims()));

  const auto samples = field.samples();
  std::vector<unsigned char> body(samples.size() * 8);
  for (std::size_t i = 0; i < samples.size(); ++i) put_le<double>(body.data() + 8 * i, samples[i]);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write snapshot '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(head.data()), head.size());
  out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (!out) throw ConfigError("short write on snapshot '" + path.string() + "'");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read snapshot '" + path.string() + "'");
  std::array<unsigned char, 64> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  if (in.gcount() != 64 || std::memcmp(head.data(), kMagic.data(), kMagic.size()) != 0)
    throw ConfigError("'" + path.string() + "' is not a snapshot file");
  const int comps = get_le<std::uint16_t>(head.data() + 6);
  const auto nx = get_le<std::uint64_t>(head.data() + 8);
  const auto ny = get_le<std::uint64_t>(head.data() + 16);
  const double len = get_le<double>(head.data() + 24);
  const double t = get_le<double>(head.data() + 32);
  const auto dims = get_le<std::uint64_t>(head.data() + 40);
  if ((dims != 1 && dims != 2) || (dims == 1 && ny != 1) || (dims == 2 && ny != nx))
    throw ConfigError("snapshot '" + path.string() + "' has an inconsistent header");
  Snapshot s;
  try {
    s.field = PeriodicField(nx, len, comps, static_cast<int>(dims));
  } catch (const PreconditionError& e) {
    throw ConfigError("snapshot '" + path.string() + "': " + e.what());
  }
  s.t = t;
  auto samples = s.field.samples();
  std::vector<unsigned char> body(samples.size() * 8);
  in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (static_cast<std::size_t>(in.gcount()) != body.size())
    throw ConfigError("snapshot '" + path.string() + "' is truncated");
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = get_le<double>(body.data() + 8 * i);
  return s;
}

void write_ledger_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  const auto cols = traj.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  std::vector<std::vector<double>> data;
  for (const auto& c : cols) data.push_back(traj.column(c));
  char buf[40];
  for (std::size_t r = 0; r < traj.ledger.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", data[c][r]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw ConfigError("short write on '" + path.string() + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != name) continue;
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[c]);
    return v;
  }
  throw ConfigError("no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  CsvTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = split(line);
    if (table.header.empty()) {
      for (const auto& h : cells)
        if (h.empty()) throw ConfigError("empty column name in CSV header");
      table.header = cells;
      continue;
    }
    if (cells.size() != table.header.size())
      throw ConfigError("CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(table.header.size()) + " fields");
    std::vector<double> row;
    for (const auto& cell : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (cell.empty() || used != cell.size())
        throw ConfigError("CSV line " + std::to_string(lineno) + ": '" + cell + "' is not a number");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ConfigError("CSV '" + path.string() + "' is empty");
  if (table.rows.empty()) throw ConfigError("CSV '" + path.string() + "' has no data rows");
  return table;
}

}  // namespace plab::cli
