#include "sigedge/phantom.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sigedge {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void validate(const PhantomSpec& s) {
  if (s.rows < 4 || s.cols < 4) throw std::invalid_argument("phantom: dimensions too small");
  if (s.cols % 2 != 0) throw std::invalid_argument("phantom: cols must be even (axis between pixels)");
  for (double d : {s.background, s.outer_density, s.circle_density, s.inner_density}) {
    if (!(d >= 0.0)) throw std::invalid_argument("phantom: densities must be >= 0");
  }
}

// Accessors shared by the parser and the formatter.
std::map<std::string, std::function<double&(PhantomSpec&)>> numeric_fields() {
  return {
      {"background", [](PhantomSpec& s) -> double& { return s.background; }},
      {"outer_density", [](PhantomSpec& s) -> double& { return s.outer_density; }},
      {"circle_density", [](PhantomSpec& s) -> double& { return s.circle_density; }},
      {"inner_density", [](PhantomSpec& s) -> double& { return s.inner_density; }},
      {"slope", [](PhantomSpec& s) -> double& { return s.slope; }},
      {"body.center_row", [](PhantomSpec& s) -> double& { return s.body.center_row; }},
      {"body.offset", [](PhantomSpec& s) -> double& { return s.body.offset; }},
      {"body.semi_rows", [](PhantomSpec& s) -> double& { return s.body.semi_rows; }},
      {"body.semi_cols", [](PhantomSpec& s) -> double& { return s.body.semi_cols; }},
      {"circle.center_row", [](PhantomSpec& s) -> double& { return s.circle.center_row; }},
      {"circle.offset", [](PhantomSpec& s) -> double& { return s.circle.offset; }},
      {"inner.center_row", [](PhantomSpec& s) -> double& { return s.inner.center_row; }},
      {"inner.offset", [](PhantomSpec& s) -> double& { return s.inner.offset; }},
      {"inner.semi_rows", [](PhantomSpec& s) -> double& { return s.inner.semi_rows; }},
      {"inner.semi_cols", [](PhantomSpec& s) -> double& { return s.inner.semi_cols; }},
  };
}

}  // namespace

bool Ellipse::contains(double row, double x) const noexcept {
  if (!present()) return false;
  const double dr = (row - center_row) / semi_rows;
  const double a = (x - offset) / semi_cols;
  const double b = (x + offset) / semi_cols;
  return dr * dr + a * a <= 1.0 || dr * dr + b * b <= 1.0;
}

PhantomSpec default_phantom() { return PhantomSpec{}; }

PhantomSpec sloped_phantom() {
  PhantomSpec s;
  s.slope = 0.002;
  return s;
}

Grid<int> label_map(const PhantomSpec& spec) {
  validate(spec);
  Grid<int> labels(spec.rows, spec.cols, kBackground);
  const double axis = spec.axis();
  for (int u = 0; u < spec.rows; ++u) {
    for (int v = 0; v < spec.cols; ++v) {
      const double x = v - axis;
      const bool in_body = spec.body.contains(u, x);
      const bool in_circle = spec.circle.contains(u, x);
      const bool in_inner = spec.inner.contains(u, x);
      if ((in_circle || in_inner) && !in_body) {
        throw std::invalid_argument("phantom: circle/inner region extends outside the body at (" +
                                    std::to_string(u) + "," + std::to_string(v) + ")");
      }
      if (in_circle && in_inner) {
        throw std::invalid_argument("phantom: circle and inner region overlap at (" +
                                    std::to_string(u) + "," + std::to_string(v) + ")");
      }
      labels(u, v) = in_inner ? kInner : in_circle ? kCircle : in_body ? kOuter : kBackground;
    }
  }
  return labels;
}

Image render(const PhantomSpec& spec) {
  const Grid<int> labels = label_map(spec);
  const double density[] = {spec.background, spec.outer_density, spec.circle_density,
                            spec.inner_density};
  Image img(spec.rows, spec.cols);
  const double axis = spec.axis();
  for (int u = 0; u < spec.rows; ++u) {
    for (int v = 0; v < spec.cols; ++v) {
      const int l = labels(u, v);
      double d = density[l];
      if (l != kBackground) d += spec.slope * std::abs(v - axis);
      img(u, v) = d;
    }
  }
  return img;
}

Mask ground_truth_edges(const PhantomSpec& spec) {
  const Grid<int> labels = label_map(spec);
  const double density[] = {spec.background, spec.outer_density, spec.circle_density,
                            spec.inner_density};
  Mask edges(spec.rows, spec.cols, 0);
  constexpr int du[] = {-1, 1, 0, 0};
  constexpr int dv[] = {0, 0, -1, 1};
  for (int u = 0; u < spec.rows; ++u) {
    for (int v = 0; v < spec.cols; ++v) {
      for (int k = 0; k < 4; ++k) {
        const int un = u + du[k];
        const int vn = v + dv[k];
        if (labels.contains(un, vn) && labels(un, vn) < labels(u, v) &&
            density[labels(un, vn)] != density[labels(u, v)]) {
          edges(u, v) = 1;
          break;
        }
      }
    }
  }
  return edges;
}

PhantomSpec parse_phantom_config(std::istream& in) {
  PhantomSpec spec;
  const auto fields = numeric_fields();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("phantom config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw std::invalid_argument("phantom config line " + std::to_string(line_no) +
                                  ": bad number for '" + key + "'");
    }
    if (key == "version") {
      if (x != 1.0) throw std::invalid_argument("phantom config: unsupported version");
    } else if (key == "rows" || key == "cols") {
      (key == "rows" ? spec.rows : spec.cols) = static_cast<int>(x);
    } else if (key == "circle.radius") {
      spec.circle.semi_rows = spec.circle.semi_cols = x;
    } else if (auto it = fields.find(key); it != fields.end()) {
      it->second(spec) = x;
    } else {
      throw std::invalid_argument("phantom config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  validate(spec);
  return spec;
}

PhantomSpec load_phantom_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open phantom config '" + path + "'");
  return parse_phantom_config(in);
}

std::string format_phantom_config(const PhantomSpec& spec) {
  // Shortest representation that parses back to the same double.
  const auto num = [](double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  std::ostringstream os;
  os << "# sigedge phantom\nversion = 1\n";
  os << "rows = " << spec.rows << "\ncols = " << spec.cols << '\n';
  PhantomSpec copy = spec;
  for (const auto& [key, get] : numeric_fields()) os << key << " = " << num(get(copy)) << '\n';
  os << "circle.radius = " << num(spec.circle.semi_rows) << '\n';
  return os.str();
}

}  // namespace sigedge
