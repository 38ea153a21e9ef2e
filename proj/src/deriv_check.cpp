#include "chad/deriv_check.hpp"

#include <cmath>
#include <sstream>

#include "chad/errors.hpp"
#include "chad/printer.hpp"
#include "chad/subst.hpp"

namespace chad {

SamplePoint make_point(const Program& p, const std::vector<ValuePtr>& values) {
  if (values.size() != p.ctx.size()) fail(Err::ShapeMismatch, "point arity");
  SamplePoint pt;
  pt.values = values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    pt.flats.push_back(flatten(p.ctx[i].second, values[i]));
    pt.coords.insert(pt.coords.end(), pt.flats.back().coords.begin(),
                     pt.flats.back().coords.end());
  }
  return pt;
}

ValuePtr random_value(const TypePtr& ty, std::mt19937_64& rng, int depth) {
  switch (ty->tag) {
    case TypeTag::Real: {
      std::uniform_real_distribution<double> d(-1.5, 1.5);
      Vec xs(ty->width);
      for (auto& x : xs) x = d(rng);
      return v_real(std::move(xs));
    }
    case TypeTag::Unit:
      return v_unit();
    case TypeTag::Prod:
      return v_pair(random_value(ty->a, rng, depth), random_value(ty->b, rng, depth));
    case TypeTag::Variant: {
      // at the depth bound, prefer the syntactically smallest payload
      std::size_t pick;
      if (depth <= 0) {
        pick = 0;
        std::size_t best = SIZE_MAX;
        for (std::size_t i = 0; i < ty->ctors.size(); ++i) {
          std::size_t sz = print_type(ty->ctors[i].second).size();
          if (sz < best) {
            best = sz;
            pick = i;
          }
        }
      } else {
        pick = std::uniform_int_distribution<std::size_t>(0, ty->ctors.size() - 1)(rng);
      }
      return v_inj(ty->ctors[pick].first, random_value(ty->ctors[pick].second, rng, depth));
    }
    case TypeTag::Mu:
      return v_roll(ty, random_value(subst_type(ty->a, ty->name, ty), rng, depth - 1));
    default:
      fail(Err::NotADataType, print_type(ty));
  }
}

SamplePoint random_point(const Program& p, std::mt19937_64& rng, int depth) {
  std::vector<ValuePtr> vs;
  for (const auto& [name, ty] : p.ctx) vs.push_back(random_value(ty, rng, depth));
  return make_point(p, vs);
}

int input_width(const SamplePoint& pt) { return static_cast<int>(pt.coords.size()); }

namespace {

Env bind_point(const Program& p, const SamplePoint& pt) {
  Env env;
  for (std::size_t i = 0; i < p.ctx.size(); ++i) env = env.extend(p.ctx[i].first, pt.values[i]);
  return env;
}

EvalConfig eval_cfg(const CheckConfig& cfg) {
  EvalConfig e;
  e.lsum_biproduct = cfg.lsum_biproduct;
  e.max_steps = cfg.max_steps;
  return e;
}

// the per-variable context tangent tuple
LinPtr ctx_tuple(const Program& p, const SamplePoint& pt, const Vec& coords, bool reverse,
                 bool biproduct) {
  LinPtr acc;
  std::size_t at = 0;
  for (std::size_t i = 0; i < p.ctx.size(); ++i) {
    std::size_t w = pt.flats[i].coords.size();
    Vec piece(coords.begin() + at, coords.begin() + at + w);
    at += w;
    auto l = lin_from_coords(p.ctx[i].second, pt.values[i], piece, reverse, biproduct);
    acc = acc ? l_pair(acc, l) : l;
  }
  if (at != coords.size()) fail(Err::ShapeMismatch, "tangent width");
  return acc ? acc : l_unit();
}

Vec ctx_coords(const Program& p, const SamplePoint& pt, const LinPtr& tuple) {
  Vec out;
  int n = static_cast<int>(p.ctx.size());
  LinPtr cur = tuple;
  std::vector<LinPtr> parts(n);
  for (int i = n; i >= 1; --i) {
    if (i == 1) {
      parts[0] = cur;
    } else if (is_zero(cur)) {
      parts[i - 1] = cur;
    } else {
      if (cur->tag != LinValue::Tag::Pair) fail(Err::ShapeMismatch, "context tuple shape");
      parts[i - 1] = cur->b;
      cur = cur->a;
    }
  }
  for (int i = 0; i < n; ++i) {
    auto piece = lin_coords(p.ctx[i].second, pt.values[i], parts[i]);
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return out;
}

}  // namespace

int output_width(const Program& p, const SamplePoint& pt) {
  Evaluator ev;
  auto out = ev.eval(bind_point(p, pt), p.body);
  return static_cast<int>(flatten(p.result, out).coords.size());
}

Vec jvp(const Program& p, const SamplePoint& pt, const Vec& tangent, const CheckConfig& cfg) {
  Evaluator ev(eval_cfg(cfg));
  auto env = bind_point(p, pt);
  auto tup = ctx_tuple(p, pt, tangent, false, cfg.lsum_biproduct);
  ValuePtr primal_out;
  LinPtr out_tan;
  if (cfg.split_mode) {
    auto [pr, tn] = fwd_transform_split(p.ctx, p.body);
    primal_out = ev.eval(env, pr);
    out_tan = ev.eval_lin(env.with_lin(tup), tn);
  } else {
    auto tr = fwd_transform(p.ctx, p.body);
    auto pairv = ev.eval(env, tr);
    primal_out = pairv->a;
    out_tan = ev.apply_lin(pairv->b, tup);
  }
  return lin_coords(p.result, primal_out, out_tan);
}

Vec vjp(const Program& p, const SamplePoint& pt, const Vec& cot, const CheckConfig& cfg) {
  Evaluator ev(eval_cfg(cfg));
  auto env = bind_point(p, pt);
  ValuePtr primal_out;
  LinPtr ctx_cot;
  if (cfg.split_mode) {
    auto [pr, ct] = rev_transform_split(p.ctx, p.body);
    primal_out = ev.eval(env, pr);
    auto w = lin_from_coords(p.result, primal_out, cot, true, cfg.lsum_biproduct);
    ctx_cot = ev.eval_lin(env.with_lin(w), ct);
  } else {
    auto tr = rev_transform(p.ctx, p.body);
    auto pairv = ev.eval(env, tr);
    primal_out = pairv->a;
    auto w = lin_from_coords(p.result, primal_out, cot, true, cfg.lsum_biproduct);
    ctx_cot = ev.apply_lin(pairv->b, w);
  }
  return ctx_coords(p, pt, ctx_cot);
}

Vec finite_diff_fn(const std::function<FlatPoint(const Vec&)>& f, const Vec& at,
                   const Vec& direction, double h) {
  if (at.size() != direction.size()) fail(Err::ShapeMismatch, "direction width");
  Vec plus = at, minus = at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    plus[i] += h * direction[i];
    minus[i] -= h * direction[i];
  }
  auto base = f(at);
  auto fp = f(plus);
  auto fm = f(minus);
  if (fp.path != base.path || fm.path != base.path)
    fail(Err::ComponentCrossed, "perturbed point lands in a different component");
  Vec out(base.coords.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (fp.coords[i] - fm.coords[i]) / (2 * h);
  return out;
}

Vec finite_diff(const Program& p, const SamplePoint& pt, const Vec& direction, double h) {
  auto f = [&](const Vec& coords) -> FlatPoint {
    Env env;
    std::size_t at = 0;
    for (std::size_t i = 0; i < p.ctx.size(); ++i) {
      FlatPoint fp;
      fp.path = pt.flats[i].path;
      std::size_t w = pt.flats[i].coords.size();
      fp.coords.assign(coords.begin() + at, coords.begin() + at + w);
      at += w;
      env = env.extend(p.ctx[i].first, unflatten(p.ctx[i].second, fp));
    }
    Evaluator ev;
    return flatten(p.result, ev.eval(env, p.body));
  };
  return finite_diff_fn(f, pt.coords, direction, h);
}

std::pair<double, double> transpose_check(const Program& p, const SamplePoint& pt, const Vec& u,
                                          const Vec& w, const CheckConfig& cfg) {
  auto ju = jvp(p, pt, u, cfg);
  auto vw = vjp(p, pt, w, cfg);
  double lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < ju.size(); ++i) lhs += ju[i] * w[i];
  for (std::size_t i = 0; i < vw.size(); ++i) rhs += vw[i] * u[i];
  return {lhs, rhs};
}

std::string DerivReport::serialize() const {
  std::ostringstream o;
  for (const auto& r : records) {
    o << "program=" << program << " point=" << r.point << " mode=" << r.mode
      << " dir=" << r.direction << " analytic=" << r.analytic << " oracle=" << r.oracle
      << " abs_err=" << r.abs_err << " rel_err=" << r.rel_err << " status=" << r.status << "\n";
  }
  o << "program=" << program << " verdict=" << (pass ? "pass" : "fail") << " checks=" << checked
    << " skipped=" << skipped << " abs_tol=" << abs_tol << " rel_tol=" << rel_tol << "\n";
  return o.str();
}

DerivReport check_derivative(const Program& p, const CheckConfig& cfg) {
  DerivReport rep;
  rep.program = p.id;
  rep.abs_tol = cfg.abs_tol;
  rep.rel_tol = cfg.rel_tol;
  std::mt19937_64 rng(cfg.seed);

  for (int pi = 0; pi < cfg.points; ++pi) {
    auto pt = random_point(p, rng, 3);
    int k = input_width(pt);
    int m = output_width(p, pt);
    if (k == 0) continue;

    // finite-difference Jacobian, one column per input direction
    std::vector<Vec> jac;
    bool crossed = false;
    for (int i = 0; i < k; ++i) {
      Vec e(k, 0.0);
      e[i] = 1.0;
      try {
        jac.push_back(finite_diff(p, pt, e, cfg.h));
      } catch (const ChadError& err) {
        if (err.kind != Err::ComponentCrossed) throw;
        DerivRecord r;
        r.point = pi;
        r.mode = "jvp";
        r.direction = i;
        r.status = "skipped";
        rep.records.push_back(r);
        ++rep.skipped;
        crossed = true;
        break;
      }
    }
    if (crossed) continue;

    auto record = [&](const std::string& mode, int dir, double got, double want) {
      DerivRecord r;
      r.point = pi;
      r.mode = mode;
      r.direction = dir;
      r.analytic = got;
      r.oracle = want;
      r.abs_err = std::fabs(got - want);
      r.rel_err = r.abs_err / std::max(1.0, std::fabs(want));
      bool ok = r.abs_err <= cfg.abs_tol || r.rel_err <= cfg.rel_tol;
      r.status = ok ? "ok" : "fail";
      if (!ok) rep.pass = false;
      ++rep.checked;
      rep.records.push_back(r);
    };

    for (int i = 0; i < k; ++i) {
      Vec e(k, 0.0);
      e[i] = 1.0;
      auto got = jvp(p, pt, e, cfg);
      for (int j = 0; j < m; ++j) record("jvp", i, got[j], jac[i][j]);
    }
    for (int j = 0; j < m; ++j) {
      Vec e(m, 0.0);
      e[j] = 1.0;
      auto got = vjp(p, pt, e, cfg);
      for (int i = 0; i < k; ++i) record("vjp", j, got[i], jac[i][j]);
    }
    // transpose consistency at a random pair of directions
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Vec u(k), w(m);
    for (auto& x : u) x = d(rng);
    for (auto& x : w) x = d(rng);
    auto [lhs, rhs] = transpose_check(p, pt, u, w, cfg);
    DerivRecord r;
    r.point = pi;
    r.mode = "transpose";
    r.analytic = lhs;
    r.oracle = rhs;
    r.abs_err = std::fabs(lhs - rhs);
    r.rel_err = r.abs_err / (1 + std::fabs(lhs));
    bool ok = r.abs_err <= cfg.transpose_rel_tol * (1 + std::fabs(lhs));
    r.status = ok ? "ok" : "fail";
    if (!ok) rep.pass = false;
    ++rep.checked;
    rep.records.push_back(r);
  }
  return rep;
}

}  // namespace chad
