#include "pdmpq/grid_io.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pdmpq/errors.hpp"

namespace pdmpq {

namespace {

constexpr const char* kMagic = "pdmpq-grid";
constexpr int kVersion = 1;

// Bit-exact text form: hex-float everywhere, positive zero shortened to 0.
std::string hexd(double x) {
  if (x == 0.0 && !std::signbit(x)) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

[[noreturn]] void malformed(const std::string& detail) {
  throw ConfigError("grid file: " + detail);
}

std::string next_token(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) malformed(std::string("unexpected end of file, wanted ") + what);
  return tok;
}

void expect(std::istream& is, const char* kw) {
  std::string tok = next_token(is, kw);
  if (tok != kw) malformed("expected '" + std::string(kw) + "', got '" + tok + "'");
}

double want_double(std::istream& is, const char* what) {
  std::string tok = next_token(is, what);
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || errno == ERANGE)
    malformed(std::string("bad number for ") + what + ": '" + tok + "'");
  return v;
}

long long want_ll(std::istream& is, const char* what) {
  std::string tok = next_token(is, what);
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(begin, &end, 10);
  if (end != begin + tok.size() || errno == ERANGE)
    malformed(std::string("bad integer for ") + what + ": '" + tok + "'");
  return v;
}

int want_int(std::istream& is, const char* what, long long lo, long long hi) {
  long long v = want_ll(is, what);
  if (v < lo || v > hi) malformed(std::string("out-of-range ") + what);
  return static_cast<int>(v);
}

std::uint64_t want_u64(std::istream& is, const char* what) {
  std::string tok = next_token(is, what);
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(begin, &end, 10);
  if (end != begin + tok.size() || errno == ERANGE)
    malformed(std::string("bad integer for ") + what + ": '" + tok + "'");
  return static_cast<std::uint64_t>(v);
}

void write_state(std::ostream& os, const State& st) {
  os << st.mode << ' ' << st.dim;
  for (int i = 0; i < st.dim; ++i) os << ' ' << hexd(st.c[static_cast<std::size_t>(i)]);
}

State read_state(std::istream& is, const char* what) {
  State st;
  st.mode = want_int(is, what, INT64_C(-1000000000), INT64_C(1000000000));
  st.dim = want_int(is, what, 0, kMaxCoords);
  st.c.fill(0.0);
  for (int i = 0; i < st.dim; ++i) st.c[static_cast<std::size_t>(i)] = want_double(is, what);
  return st;
}

}  // namespace

std::string tree_to_string(const QuantizationTree& tree) {
  std::ostringstream os;
  os << kMagic << ' ' << kVersion << '\n';
  os << "model " << tree.model_id << '\n';
  os << "start ";
  write_state(os, tree.x0);
  os << '\n';
  os << "steps " << tree.n_steps << '\n';
  os << "grid " << tree.grid_size << '\n';
  os << "norm " << hexd(tree.norm_p) << '\n';
  os << "seed " << tree.seed << '\n';
  os << "samples " << tree.training_samples << '\n';
  for (std::size_t k = 0; k < tree.books.size(); ++k) {
    const Codebook& book = tree.books[k];
    os << "book " << k << ' ' << book.nodes.size() << '\n';
    for (std::size_t i = 0; i < book.nodes.size(); ++i) {
      os << "node ";
      write_state(os, book.nodes[i].z);
      os << ' ' << hexd(book.nodes[i].s) << ' ' << hexd(book.weights[i]) << '\n';
    }
  }
  for (std::size_t k = 1; k < tree.transitions.size(); ++k) {
    const auto& rows = tree.transitions[k];
    const std::size_t cols = tree.books[k].nodes.size();
    os << "trans " << k << ' ' << rows.size() << ' ' << cols << '\n';
    for (const TransitionRow& row : rows) {
      os << "row " << (row.visited ? 1 : 0);
      std::size_t at = 0;
      for (std::size_t j = 0; j < cols; ++j) {
        if (at < row.entries.size() && row.entries[at].first == static_cast<int>(j)) {
          os << ' ' << hexd(row.entries[at].second);
          ++at;
        } else {
          os << " 0";
        }
      }
      os << '\n';
    }
  }
  for (std::size_t k = 0; k < tree.distortions.size(); ++k) {
    const StepDistortion& d = tree.distortions[k];
    os << "dist " << k << ' ' << hexd(d.pair) << ' ' << hexd(d.z) << ' ' << hexd(d.s) << '\n';
  }
  os << "end\n";
  return os.str();
}

QuantizationTree tree_from_string(const std::string& text) {
  std::istringstream is(text);
  std::string tok = next_token(is, "header");
  if (tok != kMagic) malformed("not a grid file (bad magic '" + tok + "')");
  int version = want_int(is, "version", 0, 1000000);
  if (version != kVersion)
    malformed("unsupported version " + std::to_string(version) + ", expected " +
              std::to_string(kVersion));

  QuantizationTree tree;
  expect(is, "model");
  tree.model_id = next_token(is, "model id");
  expect(is, "start");
  tree.x0 = read_state(is, "start state");
  expect(is, "steps");
  tree.n_steps = want_int(is, "steps", 0, 1000000);
  expect(is, "grid");
  tree.grid_size = want_int(is, "grid", 1, INT64_C(1000000000));
  expect(is, "norm");
  tree.norm_p = want_double(is, "norm");
  expect(is, "seed");
  tree.seed = want_u64(is, "seed");
  expect(is, "samples");
  tree.training_samples = want_ll(is, "samples");

  const std::size_t n_books = static_cast<std::size_t>(tree.n_steps) + 1;
  tree.books.resize(n_books);
  for (std::size_t k = 0; k < n_books; ++k) {
    expect(is, "book");
    std::size_t idx = static_cast<std::size_t>(want_ll(is, "book index"));
    if (idx != k) malformed("book sections out of order");
    long long n_nodes = want_ll(is, "node count");
    if (n_nodes < 0) malformed("negative node count");
    Codebook& book = tree.books[k];
    book.nodes.resize(static_cast<std::size_t>(n_nodes));
    book.weights.resize(static_cast<std::size_t>(n_nodes));
    for (long long i = 0; i < n_nodes; ++i) {
      expect(is, "node");
      PairNode& node = book.nodes[static_cast<std::size_t>(i)];
      node.z = read_state(is, "node state");
      node.s = want_double(is, "node sojourn");
      book.weights[static_cast<std::size_t>(i)] = want_double(is, "node weight");
    }
    book.rebuild_mode_index();
  }

  tree.transitions.assign(n_books, {});
  for (std::size_t k = 1; k < n_books; ++k) {
    expect(is, "trans");
    std::size_t idx = static_cast<std::size_t>(want_ll(is, "transition index"));
    if (idx != k) malformed("transition sections out of order");
    long long n_rows = want_ll(is, "row count");
    long long n_cols = want_ll(is, "column count");
    if (n_rows != static_cast<long long>(tree.books[k - 1].nodes.size()))
      malformed("row count does not match the source codebook");
    if (n_cols != static_cast<long long>(tree.books[k].nodes.size()))
      malformed("column count does not match the target codebook");
    auto& rows = tree.transitions[k];
    rows.resize(static_cast<std::size_t>(n_rows));
    for (long long r = 0; r < n_rows; ++r) {
      expect(is, "row");
      TransitionRow& row = rows[static_cast<std::size_t>(r)];
      row.visited = want_int(is, "visited flag", 0, 1) != 0;
      for (long long j = 0; j < n_cols; ++j) {
        double p = want_double(is, "transition probability");
        if (p != 0.0) row.entries.emplace_back(static_cast<int>(j), p);
      }
    }
  }

  tree.distortions.resize(n_books);
  for (std::size_t k = 0; k < n_books; ++k) {
    expect(is, "dist");
    std::size_t idx = static_cast<std::size_t>(want_ll(is, "distortion index"));
    if (idx != k) malformed("distortion sections out of order");
    StepDistortion& d = tree.distortions[k];
    d.pair = want_double(is, "pair distortion");
    d.z = want_double(is, "state distortion");
    d.s = want_double(is, "sojourn distortion");
  }
  expect(is, "end");
  return tree;
}

void save_tree(const QuantizationTree& tree, const std::string& path) {
  std::string body = tree_to_string(tree);
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw ConfigError("grid file: cannot open '" + path + "': " + std::strerror(errno));
  if (::flock(fd, LOCK_EX) != 0) {
    int err = errno;
    ::close(fd);
    throw ConfigError("grid file: cannot lock '" + path + "': " + std::strerror(err));
  }
  const char* data = body.data();
  std::size_t left = body.size();
  while (left > 0) {
    ssize_t wrote = ::write(fd, data, left);
    if (wrote < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      throw ConfigError("grid file: write to '" + path + "' failed: " + std::strerror(err));
    }
    data += wrote;
    left -= static_cast<std::size_t>(wrote);
  }
  ::close(fd);
}

QuantizationTree load_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("grid file: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return tree_from_string(buf.str());
}

}  // namespace pdmpq
