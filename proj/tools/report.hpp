#pragma once

// Reports are built once as JSON; the text form is rendered from the same
// object so both formats carry the same data.

#include <cmath>
#include <json.hpp>
#include <ostream>
#include <string>

namespace qcmce::cli {

using Report = nlohmann::ordered_json;

/// Rounds to 4 decimals so both renderings print the same digits.
inline double rounded(double v) { return std::round(v * 1e4) / 1e4; }

namespace detail {

inline std::string scalar(const Report& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline bool flat_object_array(const Report& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v) {
    if (!e.is_object()) return false;
    for (const auto& [k, x] : e.items()) {
      if (x.is_structured()) return false;
    }
  }
  return true;
}

inline void render_table(std::ostream& out, const std::string& indent, const Report& rows) {
  std::vector<std::string> keys;
  for (const auto& [k, x] : rows.front().items()) keys.push_back(k);
  std::vector<std::size_t> width;
  for (const auto& k : keys) {
    std::size_t w = k.size();
    for (const auto& r : rows) w = std::max(w, scalar(r.value(k, Report())).size());
    width.push_back(w);
  }
  auto line = [&](auto cell) {
    out << indent;
    for (std::size_t c = 0; c < keys.size(); ++c) {
      const std::string s = cell(c);
      out << (c ? "  " : "") << std::string(width[c] - s.size(), ' ') << s;
    }
    out << '\n';
  };
  line([&](std::size_t c) { return keys[c]; });
  for (const auto& r : rows) line([&](std::size_t c) { return scalar(r.value(keys[c], Report())); });
}

inline void render(std::ostream& out, const Report& obj, const std::string& indent) {
  for (const auto& [key, v] : obj.items()) {
    if (v.is_object()) {
      out << indent << key << ":\n";
      render(out, v, indent + "  ");
    } else if (flat_object_array(v)) {
      out << indent << key << ":\n";
      render_table(out, indent + "  ", v);
    } else if (v.is_array() && !v.empty() && v.front().is_string()) {
      out << indent << key << ":\n";
      for (const auto& s : v) out << indent << "  " << s.get<std::string>() << '\n';
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        out << indent << key << '[' << i << "]:\n";
        render(out, v[i], indent + "  ");
      }
    } else if (v.is_array()) {
      out << indent << key << ": [";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i]);
      out << "]\n";
    } else {
      out << indent << key << ": " << scalar(v) << '\n';
    }
  }
}

}  // namespace detail

inline void emit(std::ostream& out, const Report& report, bool json) {
  if (json) {
    out << report.dump(2) << '\n';
  } else {
    detail::render(out, report, "");
  }
}

}  // namespace qcmce::cli
