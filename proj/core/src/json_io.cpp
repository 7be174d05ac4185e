#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bubblefield::detail {
namespace {

void write(const nlohmann::json& v, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += nlohmann::json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write(it.value(), indent, depth + 1, out);
      }
      out += nl;
      out += pad_close;
      out += "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(v.begin(), v.end(), [](const auto& e) {
        return e.is_number() || e.is_boolean() || e.is_null();
      });
      out += "[";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) {
          out += nl;
          out += pad;
        }
        first = false;
        write(e, indent, depth + 1, out);
      }
      if (!flat) {
        out += nl;
        out += pad_close;
      }
      out += "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += std::isfinite(v.get<double>()) ? format_double(v.get<double>()) : "null";
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string dump_json(const nlohmann::json& value, int indent) {
  std::string out;
  write(value, indent, 0, out);
  out += "\n";
  return out;
}

nlohmann::json to_json(const Eigen::VectorXd& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bubblefield::detail
