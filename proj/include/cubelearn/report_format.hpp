#pragma once

#include <cstdio>
#include <json.hpp>
#include <string>

namespace cubelearn {

// Report rendering with a fixed numeric format: every floating value is
// printed with 9 significant digits ("%.9g"), keys keep insertion order, so
// reports are byte-identical across runs given the same inputs.

namespace detail {

inline void append_escaped(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

inline void render_value(const nlohmann::ordered_json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        append_escaped(it.key(), out);
        out += ": ";
        render_value(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        render_value(v, out, depth + 1);
      }
      out += "]";
      return;
    }
    case nlohmann::ordered_json::value_t::string:
      append_escaped(j.get_ref<const std::string&>(), out);
      return;
    case nlohmann::ordered_json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::ordered_json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case nlohmann::ordered_json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case nlohmann::ordered_json::value_t::number_float: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.9g", j.get<double>());
      out += buf;
      return;
    }
    default:
      out += "null";
      return;
  }
}

}  // namespace detail

inline std::string render_report(const nlohmann::ordered_json& report) {
  std::string out;
  detail::render_value(report, out, 0);
  out.push_back('\n');
  return out;
}

}  // namespace cubelearn
