#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "mklsvm/admm.hpp"
#include "mklsvm/error.hpp"
#include "mklsvm/io.hpp"

namespace mklsvm {

namespace {

constexpr const char* kStateMagic = "mklsvm-state";
constexpr int kStateVersion = 1;

void put_vector(std::ostream& os, const char* name, const Eigen::Ref<const Vector>& v) {
  os << name;
  for (Index i = 0; i < v.size(); ++i) os << ' ' << v(i);
  os << '\n';
}

struct Tokens {
  std::istream& is;
  std::string expect_word() {
    std::string w;
    if (!(is >> w)) throw FormatError("unexpected end of state file");
    return w;
  }
  void keyword(const std::string& kw) {
    const auto w = expect_word();
    if (w != kw) throw FormatError("state file: expected '" + kw + "', got '" + w + "'");
  }
  template <typename T>
  T value(const char* what) {
    T v;
    if (!(is >> v)) throw FormatError(std::string("state file: cannot read ") + what);
    return v;
  }
  Vector vec(const char* name, Index size) {
    keyword(name);
    Vector v(size);
    for (Index i = 0; i < size; ++i) v(i) = value<double>(name);
    return v;
  }
};

}  // namespace

void write_state(const SolverState& s, const Hyperparams& hp, std::ostream& os) {
  os << std::setprecision(17);
  os << kStateMagic << ' ' << kStateVersion << '\n';
  os << "dims " << s.samples() << ' ' << s.kernels() << '\n';
  os << "hyper " << hp.c << ' ' << hp.rho1 << ' ' << hp.rho2 << ' ' << hp.rho3 << ' ' << hp.tol
     << ' ' << hp.max_iter << '\n';
  os << "iter " << s.iter << '\n';
  os << "b " << s.b << '\n';
  os << "alpha " << s.alpha << '\n';
  put_vector(os, "d", s.d);
  put_vector(os, "z", s.z);
  put_vector(os, "theta", s.theta);
  put_vector(os, "u", s.u);
  put_vector(os, "lambda", s.lambda);
  for (Index l = 0; l < s.kernels(); ++l) put_vector(os, "vf", s.vf.row(l).transpose());
  os << "end\n";
}

SavedState read_state(std::istream& is) {
  Tokens t{is};
  t.keyword(kStateMagic);
  if (t.value<int>("version") != kStateVersion) throw FormatError("unsupported state version");
  t.keyword("dims");
  const auto m = t.value<Index>("sample count");
  const auto L = t.value<Index>("kernel count");
  if (m < 1 || L < 1) throw FormatError("state dimensions must be positive");

  SavedState out;
  t.keyword("hyper");
  out.hp.c = t.value<double>("C");
  out.hp.rho1 = t.value<double>("rho1");
  out.hp.rho2 = t.value<double>("rho2");
  out.hp.rho3 = t.value<double>("rho3");
  out.hp.tol = t.value<double>("tol");
  out.hp.max_iter = t.value<int>("max_iter");
  out.hp.validate();

  SolverState& s = out.state;
  t.keyword("iter");
  s.iter = t.value<int>("iteration count");
  t.keyword("b");
  s.b = t.value<double>("b");
  t.keyword("alpha");
  s.alpha = t.value<double>("alpha");
  s.d = t.vec("d", L);
  s.z = t.vec("z", L);
  s.theta = t.vec("theta", L);
  s.u = t.vec("u", m);
  s.lambda = t.vec("lambda", m);
  s.vf.resize(L, m);
  for (Index l = 0; l < L; ++l) s.vf.row(l) = t.vec("vf", m).transpose();
  t.keyword("end");
  return out;
}

void save_state(const SolverState& state, const Hyperparams& hp, const std::filesystem::path& path) {
  write_atomically(path, [&](std::ostream& os) { write_state(state, hp, os); });
}

SavedState load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open state file " + path.string());
  return read_state(in);
}

}  // namespace mklsvm
