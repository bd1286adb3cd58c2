#include "ggmlab/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace ggmlab::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return is;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw IoError("invalid number '" + token + "'");
  }
}

std::string trim(const std::string& s) {
  auto b = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  auto e = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return b < e ? std::string(b, e) : std::string();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void write_edge_list(std::ostream& os, int n, const std::vector<Edge>& edges) {
  os << "n=" << n << '\n';
  for (const auto& [u, v] : edges) os << u << ' ' << v << '\n';
}

void write_edge_list(const std::filesystem::path& path, int n,
                     const std::vector<Edge>& edges) {
  auto os = open_out(path);
  write_edge_list(os, n, edges);
}

EdgeList read_edge_list(std::istream& is) {
  EdgeList out;
  std::string line;
  int declared = -1;
  bool first = true;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (first && line.rfind("n=", 0) == 0) {
      declared = static_cast<int>(parse_double(line.substr(2)));
      first = false;
      continue;
    }
    first = false;
    std::istringstream ls(line);
    int u = -1;
    int v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0 || u == v ||
        (declared >= 0 && (u >= declared || v >= declared))) {
      throw IoError("edge list: invalid edge line '" + line + "'");
    }
    out.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  out.n = declared;
  if (declared < 0) {
    out.n = 0;
    for (const auto& e : out.edges) out.n = std::max(out.n, e.second + 1);
  }
  return out;
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_edge_list(is);
}

void write_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Matrix& m) {
  auto os = open_out(path);
  write_csv(os, m);
}

Matrix read_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_double(trim(cell)));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix read_csv(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_csv(is);
}

void write_matrix_market(std::ostream& os, const Matrix& m) {
  os << "%%MatrixMarket matrix array real general\n";
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) os << format_double(m(i, j)) << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  auto os = open_out(path);
  write_matrix_market(os, m);
}

Matrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("matrix market: empty input");
  std::istringstream header(lower(line));
  std::string banner, object, layout, field, symmetry;
  header >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix") {
    throw IoError("matrix market: bad banner '" + line + "'");
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw IoError("matrix market: unsupported field '" + field + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw IoError("matrix market: unsupported symmetry '" + symmetry + "'");
  }
  do {
    if (!std::getline(is, line)) throw IoError("matrix market: missing size line");
    line = trim(line);
  } while (line.empty() || line[0] == '%');

  std::istringstream size_line(line);
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  size_line >> rows >> cols;
  if (rows < 0 || cols < 0) throw IoError("matrix market: bad size line");
  Matrix m = Matrix::Zero(rows, cols);

  std::vector<std::string> tokens;
  std::string tok;
  while (is >> tok) {
    if (tok[0] == '%') {
      std::getline(is, line);
      continue;
    }
    tokens.push_back(tok);
  }
  std::size_t k = 0;
  if (layout == "array") {
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = symmetric ? j : 0; i < rows; ++i) {
        if (k >= tokens.size()) throw IoError("matrix market: truncated data");
        m(i, j) = parse_double(tokens[k++]);
        if (symmetric) m(j, i) = m(i, j);
      }
    }
  } else if (layout == "coordinate") {
    long nnz = 0;
    size_line >> nnz;
    for (long e = 0; e < nnz; ++e) {
      if (k + 3 > tokens.size()) throw IoError("matrix market: truncated data");
      const auto i = static_cast<Eigen::Index>(parse_double(tokens[k++])) - 1;
      const auto j = static_cast<Eigen::Index>(parse_double(tokens[k++])) - 1;
      const double v = parse_double(tokens[k++]);
      if (i < 0 || j < 0 || i >= rows || j >= cols) {
        throw IoError("matrix market: index out of range");
      }
      m(i, j) = v;
      if (symmetric) m(j, i) = v;
    }
  } else {
    throw IoError("matrix market: unsupported layout '" + layout + "'");
  }
  return m;
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_matrix_market(is);
}

Matrix read_matrix(const std::filesystem::path& path) {
  if (path.extension() == ".mtx") return read_matrix_market(path);
  return read_csv(path);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  if (path.extension() == ".mtx") {
    write_matrix_market(path, m);
  } else {
    write_csv(path, m);
  }
}

}  // namespace ggmlab::io
