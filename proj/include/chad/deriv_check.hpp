#pragma once

#include <random>
#include <string>
#include <vector>

#include "chad/flatten.hpp"
#include "chad/transform.hpp"

namespace chad {

struct Program {
  std::string id;
  TypeCtx ctx;     // source typing context, all data types for derivative checks
  TermPtr body;    // source term
  TypePtr result;  // source result type (filled by type_check)
};

struct CheckConfig {
  double h = 1e-5;
  double abs_tol = 1e-6;
  double rel_tol = 1e-4;
  double transpose_rel_tol = 1e-9;
  unsigned long seed = 0;
  int points = 10;
  int codata_depth = 16;
  bool lsum_biproduct = false;
  bool split_mode = false;
  long max_steps = 50'000'000;
};

// A sampled point: one value per context variable, plus its flattened form.
struct SamplePoint {
  std::vector<ValuePtr> values;
  std::vector<FlatPoint> flats;  // per variable
  Vec coords;                    // concatenated
};

SamplePoint make_point(const Program& p, const std::vector<ValuePtr>& values);
ValuePtr random_value(const TypePtr& ty, std::mt19937_64& rng, int depth);
SamplePoint random_point(const Program& p, std::mt19937_64& rng, int depth);

int input_width(const SamplePoint& pt);
int output_width(const Program& p, const SamplePoint& pt);  // evaluates once

// forward derivative applied to a flat tangent; returns flat output tangent
Vec jvp(const Program& p, const SamplePoint& pt, const Vec& tangent, const CheckConfig& cfg);
// transposed derivative applied to a flat output cotangent
Vec vjp(const Program& p, const SamplePoint& pt, const Vec& cot, const CheckConfig& cfg);

// central differences over the flattened program; throws ComponentCrossed if
// a perturbed point leaves the primal's component
Vec finite_diff(const Program& p, const SamplePoint& pt, const Vec& direction, double h);

// generic core, exposed so the branch-boundary behaviour is testable against
// arbitrary oracle functions
Vec finite_diff_fn(const std::function<FlatPoint(const Vec&)>& f, const Vec& at,
                   const Vec& direction, double h);

// (<JVP(u), w>, <u, VJP(w)>)
std::pair<double, double> transpose_check(const Program& p, const SamplePoint& pt, const Vec& u,
                                          const Vec& w, const CheckConfig& cfg);

struct DerivRecord {
  int point = 0;
  std::string mode;  // jvp | vjp | transpose
  int direction = 0;
  double analytic = 0;
  double oracle = 0;
  double abs_err = 0;
  double rel_err = 0;
  std::string status;  // ok | fail | skipped
};

struct DerivReport {
  std::string program;
  bool pass = true;
  int checked = 0;
  int skipped = 0;
  double abs_tol = 0, rel_tol = 0;
  std::vector<DerivRecord> records;

  std::string serialize() const;  // one record per line, fixed field order
};

DerivReport check_derivative(const Program& p, const CheckConfig& cfg);

}  // namespace chad
