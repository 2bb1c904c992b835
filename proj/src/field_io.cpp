#include <fstream>
#include <sstream>

#include "chiralwg/field_optics.hpp"
#include "chiralwg/io_format.hpp"

namespace chiralwg {

namespace {

const char* kHeader = "x,y,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void save_field_map(const FieldMap& field, const std::string& path) {
  field.validate();
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open '" + path + "' for writing");
  out << "# lambda_nm=" << format_double(field.lambda_nm)
      << " direction=" << to_string(field.direction) << "\n";
  out << kHeader << "\n";
  for (int ix = 0; ix < field.nx(); ++ix) {
    for (int iy = 0; iy < field.ny(); ++iy) {
      const Vector3cd& e = field.at(ix, iy);
      out << format_double(field.xs[static_cast<size_t>(ix)]) << ','
          << format_double(field.ys[static_cast<size_t>(iy)]);
      for (int c = 0; c < 3; ++c) {
        out << ',' << format_double(e(c).real()) << ','
            << format_double(e(c).imag());
      }
      out << "\n";
    }
  }
  require(out.good(), "write to '" + path + "' failed");
}

FieldMap load_field_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open field map '" + path + "'");

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "empty field map file");
  FieldMap map;
  {
    std::istringstream meta(line);
    std::string hash, token;
    meta >> hash;
    require(hash == "#", "missing metadata line '# lambda_nm=... direction=...'");
    bool have_lambda = false, have_direction = false;
    while (meta >> token) {
      const auto eq = token.find('=');
      require(eq != std::string::npos, "malformed metadata token '" + token + "'");
      const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
      if (key == "lambda_nm") {
        map.lambda_nm = parse_double(value);
        have_lambda = true;
      } else if (key == "direction") {
        require(value == "forward" || value == "backward",
                "direction must be forward or backward");
        map.direction = value == "forward" ? Direction::forward : Direction::backward;
        have_direction = true;
      } else {
        throw std::invalid_argument("unknown metadata key '" + key + "'");
      }
    }
    require(have_lambda && have_direction, "metadata must set lambda_nm and direction");
  }

  require(static_cast<bool>(std::getline(in, line)) && line == kHeader,
          std::string("field map header must be '") + kHeader + "'");

  std::vector<double> col_x, col_y;
  std::vector<Vector3cd> amps;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    require(fields.size() == 8,
            "row " + std::to_string(amps.size() + 1) + " has " +
                std::to_string(fields.size()) + " columns, expected 8");
    double v[8];
    for (int i = 0; i < 8; ++i) v[i] = parse_double(fields[static_cast<size_t>(i)]);
    col_x.push_back(v[0]);
    col_y.push_back(v[1]);
    amps.emplace_back(Complex(v[2], v[3]), Complex(v[4], v[5]), Complex(v[6], v[7]));
  }
  require(!amps.empty(), "field map has no samples");

  // rows are x-major: y cycles fastest, every x block repeats the same ys
  std::vector<double> ys{col_y[0]};
  for (size_t i = 1; i < col_y.size() && col_x[i] == col_x[0]; ++i)
    ys.push_back(col_y[i]);
  const size_t ny = ys.size();
  require(amps.size() % ny == 0, "field map rows do not form a complete grid");
  std::vector<double> xs;
  for (size_t i = 0; i < amps.size(); i += ny) xs.push_back(col_x[i]);
  for (size_t i = 0; i < amps.size(); ++i) {
    require(col_x[i] == xs[i / ny] && col_y[i] == ys[i % ny],
            "field map rows are not in x-major grid order");
  }
  map.xs = std::move(xs);
  map.ys = std::move(ys);
  map.amps = std::move(amps);
  map.validate();
  return map;
}

}  // namespace chiralwg
