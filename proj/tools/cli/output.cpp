#include "output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "json.hpp"

namespace mlpoisson::cli {

namespace {

std::string to_chars_string(double x, std::chars_format fmt, int precision) {
  std::array<char, 400> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, fmt, precision);
  return std::string(buf.data(), res.ptr);
}

// Drops trailing zeros of a fractional part, and the point if nothing is left.
std::string trim_fraction(std::string s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    return s;
  }
  const auto e = s.find('e');
  std::string exponent = e == std::string::npos ? std::string() : s.substr(e);
  std::string mantissa = e == std::string::npos ? s : s.substr(0, e);
  while (!mantissa.empty() && mantissa.back() == '0') {
    mantissa.pop_back();
  }
  if (!mantissa.empty() && mantissa.back() == '.') {
    mantissa.pop_back();
  }
  return mantissa + exponent;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + '"';
}

std::string cell_text(const Cell& c, int precision) {
  struct Visitor {
    int precision;
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v, precision); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{precision}, c);
}

nlohmann::ordered_json cell_json(const Cell& c, int precision) {
  struct Visitor {
    int precision;
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) {
        return nullptr;
      }
      // Round through the printed form so both formats carry the same digits.
      return std::strtod(format_number(v, precision).c_str(), nullptr);
    }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{precision}, c);
}

}  // namespace

std::string format_number(double x, int precision) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  if (x == 0.0) {
    return "0";
  }
  const std::string sci = to_chars_string(x, std::chars_format::scientific, precision - 1);
  const int exponent = std::atoi(sci.c_str() + sci.find('e') + 1);
  if (exponent < -4 || exponent >= 6) {
    return trim_fraction(sci);
  }
  return trim_fraction(to_chars_string(x, std::chars_format::fixed, precision - 1 - exponent));
}

void write_csv(const Document& doc, int precision, std::ostream& os) {
  for (const auto& [key, value] : doc.metadata) {
    os << "# " << key << '=' << value << '\n';
  }
  for (std::size_t t = 0; t < doc.tables.size(); ++t) {
    const Table& table = doc.tables[t];
    if (t > 0) {
      os << '\n';
    }
    if (doc.tables.size() > 1) {
      os << "# table=" << table.name << '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      os << (i ? "," : "") << csv_escape(table.columns[i]);
    }
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "") << csv_escape(cell_text(row[i], precision));
      }
      os << '\n';
    }
  }
  if (doc.error) {
    os << "# error=" << *doc.error << '\n';
  }
  os.flush();
}

void write_json(const Document& doc, int precision, std::ostream& os) {
  nlohmann::ordered_json root;
  root["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : doc.metadata) {
    root["metadata"][key] = value;
  }
  root["tables"] = nlohmann::ordered_json::object();
  for (const Table& table : doc.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
        obj[table.columns[i]] = cell_json(row[i], precision);
      }
      rows.push_back(std::move(obj));
    }
    root["tables"][table.name] = std::move(rows);
  }
  if (doc.error) {
    root["error"] = *doc.error;
  }
  os << root.dump(2) << '\n';
  os.flush();
}

void write(const Document& doc, const OutputSpec& spec, std::ostream& os) {
  if (spec.format == Format::json) {
    write_json(doc, spec.precision, os);
  } else {
    write_csv(doc, spec.precision, os);
  }
}

}  // namespace mlpoisson::cli
