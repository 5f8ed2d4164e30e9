#include "levidf/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace levidf {

namespace {

int significant_digits(std::string_view s) {
  int count = 0;
  bool seen_nonzero = false;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') continue;
    if (c != '0') seen_nonzero = true;
    if (seen_nonzero) ++count;
  }
  return count;
}

}  // namespace

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), x);
  std::string shortest(buf, r.ptr);
  if (significant_digits(shortest) <= 12) return shortest;
  auto r12 = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  return std::string(buf, r12.ptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

Json Json::object() {
  Json j;
  j.kind_ = Kind::object;
  return j;
}

Json Json::array() {
  Json j;
  j.kind_ = Kind::array;
  return j;
}

Json Json::number(double v) {
  Json j;
  j.kind_ = Kind::literal;
  if (std::isfinite(v)) {
    j.scalar_ = fmt_double(v);
  } else {
    // JSON has no inf/nan literals; emit as strings.
    j.kind_ = Kind::string;
    j.scalar_ = fmt_double(v);
  }
  return j;
}

Json Json::integer(long long v) {
  Json j;
  j.kind_ = Kind::literal;
  j.scalar_ = std::to_string(v);
  return j;
}

Json Json::string(std::string v) {
  Json j;
  j.kind_ = Kind::string;
  j.scalar_ = std::move(v);
  return j;
}

Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::literal;
  j.scalar_ = v ? "true" : "false";
  return j;
}

Json& Json::add(std::string key, Json v) {
  members_.emplace_back(std::move(key), std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  items_.push_back(std::move(v));
  return *this;
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

}  // namespace

void Json::dump_to(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (kind_) {
    case Kind::literal:
      out += scalar_;
      break;
    case Kind::string:
      append_escaped(out, scalar_);
      break;
    case Kind::object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad;
        append_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.dump_to(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "}";
      break;
    }
    case Kind::array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].dump_to(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "]";
      break;
    }
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  out += '\n';
  return out;
}

namespace {

struct Rgb {
  double r, g, b;
};

// Five-stop dark-blue -> teal -> yellow ramp.
constexpr Rgb kStops[5] = {
    {0.267, 0.005, 0.329}, {0.229, 0.322, 0.546}, {0.128, 0.567, 0.551},
    {0.369, 0.789, 0.383}, {0.993, 0.906, 0.144}};

Rgb colormap(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const double s = u * 4.0;
  const int k = std::min(3, static_cast<int>(s));
  const double f = s - k;
  return {kStops[k].r + f * (kStops[k + 1].r - kStops[k].r),
          kStops[k].g + f * (kStops[k + 1].g - kStops[k].g),
          kStops[k].b + f * (kStops[k + 1].b - kStops[k].b)};
}

std::string hex_color(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(c.r * 255.0)),
                static_cast<int>(std::lround(c.g * 255.0)),
                static_cast<int>(std::lround(c.b * 255.0)));
  return buf;
}

}  // namespace

std::string svg_heatmap(const std::vector<double>& values, int nx, int ny,
                        std::string_view title, std::string_view xlabel,
                        std::string_view ylabel, double xmin, double xmax, double ymin,
                        double ymax) {
  const double plot_w = 480.0, plot_h = 360.0;
  const double left = 70.0, top = 50.0;
  const double legend_x = left + plot_w + 30.0;
  const double width = legend_x + 90.0, height = top + plot_h + 60.0;

  double vmin = values.empty() ? 0.0 : values[0];
  double vmax = vmin;
  for (double v : values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  const double span = (vmax > vmin) ? (vmax - vmin) : 1.0;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_double(width) +
         "\" height=\"" + fmt_double(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt_double(left + plot_w / 2) +
         "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         std::string(title) + "</text>\n";

  const double cw = plot_w / nx, ch = plot_h / ny;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = values[static_cast<std::size_t>(j) * nx + i];
      const std::string color = hex_color(colormap((v - vmin) / span));
      // y axis points up: row 0 at the bottom.
      const double x = left + i * cw;
      const double y = top + plot_h - (j + 1) * ch;
      svg += "<rect x=\"" + fmt_double(x) + "\" y=\"" + fmt_double(y) + "\" width=\"" +
             fmt_double(cw + 0.5) + "\" height=\"" + fmt_double(ch + 0.5) + "\" fill=\"" +
             color + "\"/>\n";
    }
  }

  svg += "<rect x=\"" + fmt_double(left) + "\" y=\"" + fmt_double(top) + "\" width=\"" +
         fmt_double(plot_w) + "\" height=\"" + fmt_double(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  auto axis_text = [&](double x, double y, std::string_view anchor, std::string text) {
    svg += "<text x=\"" + fmt_double(x) + "\" y=\"" + fmt_double(y) + "\" text-anchor=\"" +
           std::string(anchor) + "\" font-family=\"sans-serif\" font-size=\"12\">" + text +
           "</text>\n";
  };
  axis_text(left, top + plot_h + 18, "middle", fmt_double(xmin));
  axis_text(left + plot_w, top + plot_h + 18, "middle", fmt_double(xmax));
  axis_text(left + plot_w / 2, top + plot_h + 36, "middle", std::string(xlabel));
  axis_text(left - 8, top + plot_h, "end", fmt_double(ymin));
  axis_text(left - 8, top + 12, "end", fmt_double(ymax));
  svg += "<text x=\"18\" y=\"" + fmt_double(top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 18 " +
         fmt_double(top + plot_h / 2) + ")\">" + std::string(ylabel) + "</text>\n";

  // Legend: vertical gradient bar, min at the bottom.
  const int legend_steps = 64;
  const double lh = plot_h / legend_steps;
  for (int k = 0; k < legend_steps; ++k) {
    const double u = (k + 0.5) / legend_steps;
    svg += "<rect x=\"" + fmt_double(legend_x) + "\" y=\"" +
           fmt_double(top + plot_h - (k + 1) * lh) + "\" width=\"18\" height=\"" +
           fmt_double(lh + 0.5) + "\" fill=\"" + hex_color(colormap(u)) + "\"/>\n";
  }
  svg += "<rect x=\"" + fmt_double(legend_x) + "\" y=\"" + fmt_double(top) +
         "\" width=\"18\" height=\"" + fmt_double(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  axis_text(legend_x + 24, top + plot_h + 4, "start", fmt_double(vmin));
  axis_text(legend_x + 24, top + 10, "start", fmt_double(vmax));
  axis_text(legend_x + 24, top + plot_h / 2 + 4, "start", fmt_double(vmin + span / 2));

  svg += "</svg>\n";
  return svg;
}

}  // namespace levidf
