#include <algorithm>
#include <cstdio>

#include "paracons/report.hpp"

namespace paracons {
namespace {

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

// Display width in code points; cells are UTF-8 ("±").
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t w) {
  return s + std::string(w - std::min(w, width(s)), ' ');
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string format_cell(const std::optional<MeanStd>& v, int precision) {
  if (!v) return "n/a";
  return fixed(v->mean, precision) + " ±" + fixed(v->std, precision);
}

std::string format_row(std::span<const std::optional<MeanStd>> cells, int precision) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += " / ";
    out += format_cell(cells[i], precision);
  }
  return out;
}

std::string render_text(const Table& table) {
  std::vector<std::size_t> w(table.header.size(), 0);
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = width(table.header[c]);
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size() && c < w.size(); ++c) {
      w[c] = std::max(w[c], width(row[c].text));
    }
  }
  auto line = [&](auto&& text_of) {
    std::string s;
    for (std::size_t c = 0; c < w.size(); ++c) {
      if (c) s += "  ";
      s += c + 1 == w.size() ? text_of(c) : pad(text_of(c), w[c]);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + "\n";
  };
  std::string out = table.title + "\n";
  out += line([&](std::size_t c) { return table.header[c]; });
  std::size_t total = 0;
  for (auto x : w) total += x;
  out += std::string(total + 2 * (w.empty() ? 0 : w.size() - 1), '-') + "\n";
  for (const auto& row : table.rows) {
    out += line([&](std::size_t c) { return c < row.size() ? row[c].text : std::string(); });
  }
  if (!table.caption.empty()) out += table.caption + "\n";
  return out;
}

std::string render_csv(const Table& table) {
  std::vector<bool> numeric(table.header.size(), false);
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size() && c < numeric.size(); ++c) {
      numeric[c] = numeric[c] || row[c].numeric;
    }
  }
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += numeric[c] ? csv_field(table.header[c] + "_mean") + "," +
                            csv_field(table.header[c] + "_std")
                      : csv_field(table.header[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c) out += ',';
      const Cell* cell = c < row.size() ? &row[c] : nullptr;
      if (numeric[c]) {
        if (cell && cell->value) out += full(cell->value->mean) + "," + full(cell->value->std);
        else out += ",";
      } else {
        out += cell ? csv_field(cell->text) : "";
      }
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const std::optional<MeanStd>& v) {
  if (!v) return nullptr;
  return {{"mean", v->mean}, {"std", v->std}, {"n", v->n}};
}

nlohmann::ordered_json to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    for (std::size_t c = 0; c < table.header.size() && c < row.size(); ++c) {
      r[table.header[c]] = row[c].numeric ? to_json(row[c].value)
                                          : nlohmann::ordered_json(row[c].text);
    }
    rows.push_back(std::move(r));
  }
  return {{"id", table.id}, {"title", table.title}, {"caption", table.caption},
          {"columns", table.header}, {"rows", std::move(rows)}};
}

}  // namespace paracons
