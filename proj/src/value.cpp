#include "chad/value.hpp"

#include <sstream>

#include "chad/errors.hpp"
#include "chad/printer.hpp"

namespace chad {

namespace {
std::shared_ptr<Value> vnode(Value::Tag tag) {
  auto v = std::make_shared<Value>();
  v->tag = tag;
  return v;
}
std::shared_ptr<LinValue> lnode(LinValue::Tag tag) {
  auto v = std::make_shared<LinValue>();
  v->tag = tag;
  return v;
}
}  // namespace

ValuePtr v_real(Vec xs) {
  auto v = vnode(Value::Tag::RealVec);
  v->vec = std::move(xs);
  return v;
}
ValuePtr v_unit() { return vnode(Value::Tag::Unit); }
ValuePtr v_pair(ValuePtr a, ValuePtr b) {
  auto v = vnode(Value::Tag::Pair);
  v->a = std::move(a);
  v->b = std::move(b);
  return v;
}
ValuePtr v_inj(std::string label, ValuePtr payload) {
  auto v = vnode(Value::Tag::Inj);
  v->label = std::move(label);
  v->a = std::move(payload);
  return v;
}
ValuePtr v_roll(TypePtr mu, ValuePtr payload) {
  auto v = vnode(Value::Tag::Roll);
  v->ty = std::move(mu);
  v->a = std::move(payload);
  return v;
}
ValuePtr v_closure(std::string binder, TermPtr body, Env env) {
  auto v = vnode(Value::Tag::Closure);
  v->binder = std::move(binder);
  v->body = std::move(body);
  v->env = std::move(env);
  return v;
}
ValuePtr v_linclosure(TermPtr body, Env env) {
  auto v = vnode(Value::Tag::LinClosure);
  v->body = std::move(body);
  v->env = std::move(env);
  return v;
}
ValuePtr v_codata(TypePtr nu, std::function<ValuePtr()> force) {
  auto v = vnode(Value::Tag::Codata);
  auto cell = std::make_shared<CodataCell>();
  cell->nu = std::move(nu);
  cell->force_once = std::move(force);
  v->codata = cell;
  return v;
}

LinPtr l_vec(Vec xs) {
  auto v = lnode(LinValue::Tag::Vec);
  v->vec = std::move(xs);
  return v;
}
LinPtr l_unit() { return lnode(LinValue::Tag::Unit); }
LinPtr l_pair(LinPtr a, LinPtr b) {
  auto v = lnode(LinValue::Tag::Pair);
  v->a = std::move(a);
  v->b = std::move(b);
  return v;
}
LinPtr l_sum_at(int index, LinPtr payload) {
  auto v = lnode(LinValue::Tag::SumAt);
  v->index = index;
  v->a = std::move(payload);
  return v;
}
LinPtr l_tuple(std::vector<LinPtr> items) {
  auto v = lnode(LinValue::Tag::Tuple);
  v->items = std::move(items);
  return v;
}
LinPtr l_power(std::function<LinPtr(const ValuePtr&)> f) {
  auto v = lnode(LinValue::Tag::Power);
  v->power = std::move(f);
  return v;
}
LinPtr l_copow(std::vector<std::pair<ValuePtr, LinPtr>> pairs) {
  auto v = lnode(LinValue::Tag::Copow);
  v->pairs = std::move(pairs);
  return v;
}
LinPtr l_roll(TypePtr lmu, LinPtr payload) {
  auto v = lnode(LinValue::Tag::Roll);
  v->ty = std::move(lmu);
  v->a = std::move(payload);
  return v;
}
LinPtr l_codata(TypePtr lnu, std::function<LinPtr()> force) {
  auto v = lnode(LinValue::Tag::Codata);
  auto cell = std::make_shared<LinThunk>();
  cell->nu = std::move(lnu);
  cell->force_once = std::move(force);
  v->thunk = cell;
  return v;
}
LinPtr l_zero() {
  static const LinPtr z = lnode(LinValue::Tag::ZeroAny);
  return z;
}

bool is_zero(const LinPtr& l) { return l->tag == LinValue::Tag::ZeroAny; }

LinPtr lin_add(const LinPtr& a, const LinPtr& b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (a->tag != b->tag) fail(Err::Internal, "adding linear values of different shapes");
  switch (a->tag) {
    case LinValue::Tag::Vec: {
      if (a->vec.size() != b->vec.size()) fail(Err::Internal, "adding vectors of different widths");
      Vec r(a->vec.size());
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = a->vec[i] + b->vec[i];
      return l_vec(std::move(r));
    }
    case LinValue::Tag::Unit:
      return a;
    case LinValue::Tag::Pair:
      return l_pair(lin_add(a->a, b->a), lin_add(a->b, b->b));
    case LinValue::Tag::SumAt:
      if (a->index != b->index)
        fail(Err::MismatchedBranch, "adding cotangents of branches " + std::to_string(a->index) +
                                        " and " + std::to_string(b->index));
      return l_sum_at(a->index, lin_add(a->a, b->a));
    case LinValue::Tag::Tuple: {
      if (a->items.size() != b->items.size()) fail(Err::Internal, "tuple width mismatch");
      std::vector<LinPtr> r;
      r.reserve(a->items.size());
      for (std::size_t i = 0; i < a->items.size(); ++i) r.push_back(lin_add(a->items[i], b->items[i]));
      return l_tuple(std::move(r));
    }
    case LinValue::Tag::Power: {
      auto fa = a->power, fb = b->power;
      return l_power([fa, fb](const ValuePtr& x) { return lin_add(fa(x), fb(x)); });
    }
    case LinValue::Tag::Copow: {
      auto r = a->pairs;
      r.insert(r.end(), b->pairs.begin(), b->pairs.end());
      return l_copow(std::move(r));
    }
    case LinValue::Tag::Roll:
      return l_roll(a->ty, lin_add(a->a, b->a));
    case LinValue::Tag::Codata: {
      LinPtr la = a, lb = b;
      return l_codata(a->thunk->nu,
                      [la, lb] { return lin_add(force_lin(la), force_lin(lb)); });
    }
    case LinValue::Tag::ZeroAny:
      return a;
  }
  fail(Err::Internal, "unreachable add");
}

LinPtr lin_zero_of(const TypePtr& linty) {
  switch (linty->tag) {
    case TypeTag::LReal:
      return l_vec(Vec(linty->width, 0.0));
    case TypeTag::LUnit:
      return l_unit();
    case TypeTag::LProd:
      return l_pair(lin_zero_of(linty->a), lin_zero_of(linty->b));
    case TypeTag::Copower:
      return l_copow({});
    case TypeTag::LSum:
    case TypeTag::LMu:
    case TypeTag::LNu:
    case TypeTag::Power:
    case TypeTag::TVar:
      return l_zero();
    default:
      fail(Err::NotLinearType, "zero at " + print_type(linty));
  }
}

LinPtr force_lin(const LinPtr& v) {
  if (v->tag != LinValue::Tag::Codata) fail(Err::Internal, "forcing a non-codata linear value");
  if (!v->thunk->memo) v->thunk->memo = v->thunk->force_once();
  return *v->thunk->memo;
}

ValuePtr force_codata(const ValuePtr& v) {
  if (v->tag != Value::Tag::Codata) fail(Err::Internal, "forcing a non-codata value");
  if (!v->codata->memo) v->codata->memo = v->codata->force_once();
  return *v->codata->memo;
}

namespace {
void pv(std::ostringstream& o, const ValuePtr& v) {
  switch (v->tag) {
    case Value::Tag::RealVec:
      if (v->vec.size() == 1) {
        o << v->vec[0];
      } else {
        o << "[";
        for (std::size_t i = 0; i < v->vec.size(); ++i) {
          if (i) o << ", ";
          o << v->vec[i];
        }
        o << "]";
      }
      break;
    case Value::Tag::Unit: o << "()"; break;
    case Value::Tag::Pair:
      o << "(";
      pv(o, v->a);
      o << ", ";
      pv(o, v->b);
      o << ")";
      break;
    case Value::Tag::Inj:
      o << v->label << " ";
      pv(o, v->a);
      break;
    case Value::Tag::Roll:
      o << "roll(";
      pv(o, v->a);
      o << ")";
      break;
    case Value::Tag::Closure: o << "<fun>"; break;
    case Value::Tag::LinClosure: o << "<linfun>"; break;
    case Value::Tag::Codata: o << "<codata>"; break;
  }
}
void plv(std::ostringstream& o, const LinPtr& v) {
  switch (v->tag) {
    case LinValue::Tag::Vec:
      if (v->vec.size() == 1) {
        o << v->vec[0];
      } else {
        o << "[";
        for (std::size_t i = 0; i < v->vec.size(); ++i) {
          if (i) o << ", ";
          o << v->vec[i];
        }
        o << "]";
      }
      break;
    case LinValue::Tag::Unit: o << "()"; break;
    case LinValue::Tag::Pair:
      o << "(";
      plv(o, v->a);
      o << ", ";
      plv(o, v->b);
      o << ")";
      break;
    case LinValue::Tag::SumAt:
      o << "at" << v->index << "(";
      plv(o, v->a);
      o << ")";
      break;
    case LinValue::Tag::Tuple: {
      o << "{";
      for (std::size_t i = 0; i < v->items.size(); ++i) {
        if (i) o << "; ";
        plv(o, v->items[i]);
      }
      o << "}";
      break;
    }
    case LinValue::Tag::Power: o << "<power>"; break;
    case LinValue::Tag::Copow: {
      o << "copow[";
      for (std::size_t i = 0; i < v->pairs.size(); ++i) {
        if (i) o << ", ";
        o << "!";
        pv(o, v->pairs[i].first);
        o << " (x) ";
        plv(o, v->pairs[i].second);
      }
      o << "]";
      break;
    }
    case LinValue::Tag::Roll:
      o << "roll(";
      plv(o, v->a);
      o << ")";
      break;
    case LinValue::Tag::Codata: o << "<lin-codata>"; break;
    case LinValue::Tag::ZeroAny: o << "0_"; break;
  }
}
}  // namespace

std::string print_value(const ValuePtr& v) {
  std::ostringstream o;
  pv(o, v);
  return o.str();
}

std::string print_lin_value(const LinPtr& v) {
  std::ostringstream o;
  plv(o, v);
  return o.str();
}

}  // namespace chad
