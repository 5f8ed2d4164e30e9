#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace levidf {

/// Shortest round-trip decimal, capped at 12 significant digits. All report
/// output goes through this so serialized runs are byte-deterministic.
std::string fmt_double(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);

/// Minimal ordered JSON value for report emission. Numbers are preformatted
/// with fmt_double; object members keep insertion order.
class Json {
 public:
  static Json object();
  static Json array();
  static Json number(double v);
  static Json integer(long long v);
  static Json string(std::string v);
  static Json boolean(bool v);

  Json& add(std::string key, Json v);
  Json& push(Json v);

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { object, array, literal, string };
  Kind kind_ = Kind::object;
  std::string scalar_;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> items_;

  void dump_to(std::string& out, int indent, int depth) const;
};

/// Heatmap of a grid of values as a standalone SVG with a linear color legend.
/// `values` is row-major with `nx` columns (x = fast axis).
std::string svg_heatmap(const std::vector<double>& values, int nx, int ny,
                        std::string_view title, std::string_view xlabel,
                        std::string_view ylabel, double xmin, double xmax, double ymin,
                        double ymax);

}  // namespace levidf
