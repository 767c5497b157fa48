#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "vnls/cli.hpp"

namespace vnls::cli {

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // folds -0 into 0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string comment_header(const RunConfig& config, std::string_view command) {
  std::string s = "# ";
  s += kToolName;
  s += ' ';
  s += kVersion;
  s += " command=";
  s += command;
  s += " config-fnv1a64=";
  s += config.digest;
  s += '\n';
  return s;
}

void write_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into " + path);
  }
}

std::string field_csv(const RunConfig& config, const FieldGrid& grid) {
  std::string s = comment_header(config, "simulate");
  s += "x,t";
  for (int j = 1; j <= grid.n; ++j) s += ",re_R" + std::to_string(j) + ",im_R" + std::to_string(j);
  s += '\n';
  for (const FieldSample& smp : grid.samples) {
    s += format_real(smp.x);
    s += ',';
    s += format_real(smp.t);
    for (Eigen::Index j = 0; j < smp.R.size(); ++j) {
      s += ',';
      s += format_real(smp.R(j).real());
      s += ',';
      s += format_real(smp.R(j).imag());
    }
    s += '\n';
  }
  return s;
}

std::string heatmap_pgm(const RunConfig& config, const FieldGrid& grid, int component) {
  const int nx = grid.axes.x.count, nt = grid.axes.t.count;
  double peak = 0.0;
  for (const FieldSample& smp : grid.samples) peak = std::max(peak, std::abs(smp.R(component)));

  std::string s = "P5\n" + comment_header(config, "simulate");
  s += "# |R" + std::to_string(component + 1) + "| rows t ascending, columns x ascending, 255 = " +
       format_real(peak) + "\n";
  s += std::to_string(nx) + " " + std::to_string(nt) + "\n255\n";
  for (const FieldSample& smp : grid.samples) {
    const double v = peak > 0.0 ? std::abs(smp.R(component)) / peak : 0.0;
    s += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0))));
  }
  return s;
}

}  // namespace vnls::cli
