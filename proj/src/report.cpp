#include "lrga/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrga {

namespace {

void dump(const nlohmann::json& j, int indent, int level, std::ostringstream& out) {
  const auto pad = [&](int l) {
    if (indent >= 0) out << '\n' << std::string(static_cast<std::size_t>(indent * l), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        first = false;
        pad(level + 1);
        out << nlohmann::json(it.key()).dump() << (indent >= 0 ? ": " : ":");
        dump(it.value(), indent, level + 1, out);
      }
      pad(level);
      out << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out << ',';
        first = false;
        pad(level + 1);
        dump(v, indent, level + 1, out);
      }
      pad(level);
      out << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        out << format_double(v);
      } else {
        out << '"' << format_double(v) << '"';
      }
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const nlohmann::json& j, int indent) {
  std::ostringstream out;
  dump(j, indent, 0, out);
  return out.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace lrga
