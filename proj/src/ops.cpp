#include "chad/ops.hpp"

#include <cmath>
#include <map>

#include "chad/errors.hpp"

namespace chad {

namespace {

double sigmoid1(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::optional<int> same_width2(const std::vector<int>& w) {
  if (w.size() != 2 || w[0] != w[1] || w[0] < 1) return std::nullopt;
  return w[0];
}

std::optional<int> scalar1(const std::vector<int>& w) {
  if (w.size() != 1 || w[0] != 1) return std::nullopt;
  return 1;
}

Vec ew(const Vec& a, const Vec& b, double (*f)(double, double)) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f(a[i], b[i]);
  return r;
}

const std::map<std::string, PrimImpl>& table() {
  static const std::map<std::string, PrimImpl> t = [] {
    std::map<std::string, PrimImpl> m;

    m["add"] = PrimImpl{
        "add", 2, same_width2,
        [](const std::vector<Vec>& a) { return ew(a[0], a[1], [](double x, double y) { return x + y; }); },
        [](const std::vector<Vec>&, const std::vector<Vec>& d) {
          return ew(d[0], d[1], [](double x, double y) { return x + y; });
        },
        [](const std::vector<Vec>&, const Vec& w) { return std::vector<Vec>{w, w}; }};

    m["sub"] = PrimImpl{
        "sub", 2, same_width2,
        [](const std::vector<Vec>& a) { return ew(a[0], a[1], [](double x, double y) { return x - y; }); },
        [](const std::vector<Vec>&, const std::vector<Vec>& d) {
          return ew(d[0], d[1], [](double x, double y) { return x - y; });
        },
        [](const std::vector<Vec>&, const Vec& w) {
          Vec neg(w.size());
          for (std::size_t i = 0; i < w.size(); ++i) neg[i] = -w[i];
          return std::vector<Vec>{w, neg};
        }};

    m["mul"] = PrimImpl{
        "mul", 2, same_width2,
        [](const std::vector<Vec>& a) { return ew(a[0], a[1], [](double x, double y) { return x * y; }); },
        [](const std::vector<Vec>& a, const std::vector<Vec>& d) {
          Vec r(a[0].size());
          for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[0][i] * d[1][i] + a[1][i] * d[0][i];
          return r;
        },
        [](const std::vector<Vec>& a, const Vec& w) {
          Vec da(w.size()), db(w.size());
          for (std::size_t i = 0; i < w.size(); ++i) {
            da[i] = a[1][i] * w[i];
            db[i] = a[0][i] * w[i];
          }
          return std::vector<Vec>{da, db};
        }};

    // matrix-vector product: first argument is an n x m matrix flattened
    // row-major, second an m-vector, result an n-vector
    m["matvec"] = PrimImpl{
        "matvec", 2,
        [](const std::vector<int>& w) -> std::optional<int> {
          if (w.size() != 2 || w[1] < 1 || w[0] < 1 || w[0] % w[1] != 0) return std::nullopt;
          return w[0] / w[1];
        },
        [](const std::vector<Vec>& a) {
          std::size_t mm = a[1].size(), nn = a[0].size() / mm;
          Vec r(nn, 0.0);
          for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t j = 0; j < mm; ++j) r[i] += a[0][i * mm + j] * a[1][j];
          return r;
        },
        [](const std::vector<Vec>& a, const std::vector<Vec>& d) {
          std::size_t mm = a[1].size(), nn = a[0].size() / mm;
          Vec r(nn, 0.0);
          for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t j = 0; j < mm; ++j)
              r[i] += d[0][i * mm + j] * a[1][j] + a[0][i * mm + j] * d[1][j];
          return r;
        },
        [](const std::vector<Vec>& a, const Vec& w) {
          std::size_t mm = a[1].size(), nn = a[0].size() / mm;
          Vec dA(a[0].size(), 0.0), dx(mm, 0.0);
          for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t j = 0; j < mm; ++j) {
              dA[i * mm + j] = w[i] * a[1][j];
              dx[j] += a[0][i * mm + j] * w[i];
            }
          return std::vector<Vec>{dA, dx};
        }};

    m["sum"] = PrimImpl{
        "sum", 1,
        [](const std::vector<int>& w) -> std::optional<int> {
          if (w.size() != 1 || w[0] < 1) return std::nullopt;
          return 1;
        },
        [](const std::vector<Vec>& a) {
          double s = 0;
          for (double x : a[0]) s += x;
          return Vec{s};
        },
        [](const std::vector<Vec>&, const std::vector<Vec>& d) {
          double s = 0;
          for (double x : d[0]) s += x;
          return Vec{s};
        },
        [](const std::vector<Vec>& a, const Vec& w) {
          return std::vector<Vec>{Vec(a[0].size(), w[0])};
        }};

    m["sigmoid"] = PrimImpl{
        "sigmoid", 1, scalar1,
        [](const std::vector<Vec>& a) { return Vec{sigmoid1(a[0][0])}; },
        [](const std::vector<Vec>& a, const std::vector<Vec>& d) {
          double s = sigmoid1(a[0][0]);
          return Vec{s * (1 - s) * d[0][0]};
        },
        [](const std::vector<Vec>& a, const Vec& w) {
          double s = sigmoid1(a[0][0]);
          return std::vector<Vec>{Vec{s * (1 - s) * w[0]}};
        }};

    m["sin"] = PrimImpl{
        "sin", 1, scalar1,
        [](const std::vector<Vec>& a) { return Vec{std::sin(a[0][0])}; },
        [](const std::vector<Vec>& a, const std::vector<Vec>& d) {
          return Vec{std::cos(a[0][0]) * d[0][0]};
        },
        [](const std::vector<Vec>& a, const Vec& w) {
          return std::vector<Vec>{Vec{std::cos(a[0][0]) * w[0]}};
        }};

    m["cos"] = PrimImpl{
        "cos", 1, scalar1,
        [](const std::vector<Vec>& a) { return Vec{std::cos(a[0][0])}; },
        [](const std::vector<Vec>& a, const std::vector<Vec>& d) {
          return Vec{-std::sin(a[0][0]) * d[0][0]};
        },
        [](const std::vector<Vec>& a, const Vec& w) {
          return std::vector<Vec>{Vec{-std::sin(a[0][0]) * w[0]}};
        }};

    return m;
  }();
  return t;
}

std::vector<int> widths_of(const std::vector<Vec>& args) {
  std::vector<int> w;
  for (const auto& a : args) w.push_back(static_cast<int>(a.size()));
  return w;
}

}  // namespace

const PrimImpl* find_prim(const std::string& name) {
  auto it = table().find(name);
  return it == table().end() ? nullptr : &it->second;
}

std::vector<std::string> prim_names() {
  std::vector<std::string> ns;
  for (const auto& [k, v] : table()) ns.push_back(k);
  return ns;
}

OpSig op_sig(const std::string& name, const std::vector<int>& arg_widths) {
  const PrimImpl* p = find_prim(name);
  if (!p) fail(Err::UnknownOp, "no primitive operation '" + name + "'");
  if (static_cast<int>(arg_widths.size()) != p->arity)
    fail(Err::ArityMismatch, name + " expects " + std::to_string(p->arity) + " arguments");
  auto m = p->result_width(arg_widths);
  if (!m) fail(Err::TypeMismatch, "bad argument widths for " + name);
  return OpSig{name, arg_widths, *m};
}

Vec prim_eval(const std::string& op, const std::vector<Vec>& args) {
  op_sig(op, widths_of(args));
  return find_prim(op)->eval(args);
}

Vec prim_jvp(const std::string& op, const std::vector<Vec>& args, const std::vector<Vec>& tangents) {
  op_sig(op, widths_of(args));
  return find_prim(op)->jvp(args, tangents);
}

std::vector<Vec> prim_vjp(const std::string& op, const std::vector<Vec>& args, const Vec& cot) {
  op_sig(op, widths_of(args));
  return find_prim(op)->vjp(args, cot);
}

}  // namespace chad
