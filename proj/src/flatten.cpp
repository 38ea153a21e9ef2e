#include "chad/flatten.hpp"

#include "chad/errors.hpp"
#include "chad/printer.hpp"
#include "chad/subst.hpp"

namespace chad {

bool is_data_type(const TypePtr& ty) {
  switch (ty->tag) {
    case TypeTag::Real:
    case TypeTag::Unit:
      return true;
    case TypeTag::Prod:
      return is_data_type(ty->a) && is_data_type(ty->b);
    case TypeTag::Variant: {
      for (const auto& c : ty->ctors)
        if (!is_data_type(c.second)) return false;
      return true;
    }
    case TypeTag::Mu: {
      // the bound variable stands for the data type itself
      std::set<std::string> fv = free_type_vars(ty->a);
      fv.erase(ty->name);
      if (!fv.empty()) return false;
      return is_data_type(subst_type(ty->a, ty->name, ty_unit()));
    }
    default:
      return false;
  }
}

namespace {

void flatten_rec(const TypePtr& ty, const ValuePtr& v, FlatPoint& out) {
  switch (ty->tag) {
    case TypeTag::Real: {
      if (v->tag != Value::Tag::RealVec) fail(Err::ShapeMismatch, "expected a real array");
      if (static_cast<int>(v->vec.size()) != ty->width)
        fail(Err::ShapeMismatch, "array width mismatch");
      out.coords.insert(out.coords.end(), v->vec.begin(), v->vec.end());
      return;
    }
    case TypeTag::Unit:
      return;
    case TypeTag::Prod:
      flatten_rec(ty->a, v->a, out);
      flatten_rec(ty->b, v->b, out);
      return;
    case TypeTag::Variant: {
      if (v->tag != Value::Tag::Inj) fail(Err::ShapeMismatch, "expected a variant value");
      for (std::size_t i = 0; i < ty->ctors.size(); ++i)
        if (ty->ctors[i].first == v->label) {
          out.path.push_back(static_cast<int>(i) + 1);
          flatten_rec(ty->ctors[i].second, v->a, out);
          return;
        }
      fail(Err::ShapeMismatch, "constructor " + v->label + " not in " + print_type(ty));
    }
    case TypeTag::Mu: {
      if (v->tag != Value::Tag::Roll) fail(Err::ShapeMismatch, "expected a rolled value");
      flatten_rec(subst_type(ty->a, ty->name, ty), v->a, out);
      return;
    }
    default:
      fail(Err::NotADataType, print_type(ty));
  }
}

struct Reader {
  const FlatPoint& fp;
  std::size_t path_at = 0;
  std::size_t coord_at = 0;

  ValuePtr read(const TypePtr& ty) {
    switch (ty->tag) {
      case TypeTag::Real: {
        if (coord_at + ty->width > fp.coords.size())
          fail(Err::ShapeMismatch, "not enough coordinates");
        Vec xs(fp.coords.begin() + coord_at, fp.coords.begin() + coord_at + ty->width);
        coord_at += ty->width;
        return v_real(std::move(xs));
      }
      case TypeTag::Unit:
        return v_unit();
      case TypeTag::Prod: {
        auto a = read(ty->a);
        auto b = read(ty->b);
        return v_pair(a, b);
      }
      case TypeTag::Variant: {
        if (path_at >= fp.path.size()) fail(Err::ShapeMismatch, "component path too short");
        int choice = fp.path[path_at++];
        if (choice < 1 || choice > static_cast<int>(ty->ctors.size()))
          fail(Err::ShapeMismatch, "component path out of range");
        return v_inj(ty->ctors[choice - 1].first, read(ty->ctors[choice - 1].second));
      }
      case TypeTag::Mu:
        return v_roll(ty, read(subst_type(ty->a, ty->name, ty)));
      default:
        fail(Err::NotADataType, print_type(ty));
    }
  }
};

}  // namespace

FlatPoint flatten(const TypePtr& ty, const ValuePtr& v) {
  if (!is_data_type(ty)) fail(Err::NotADataType, print_type(ty));
  FlatPoint fp;
  flatten_rec(ty, v, fp);
  return fp;
}

ValuePtr unflatten(const TypePtr& ty, const FlatPoint& fp) {
  if (!is_data_type(ty)) fail(Err::NotADataType, print_type(ty));
  Reader r{fp};
  auto v = r.read(ty);
  if (r.path_at != fp.path.size()) fail(Err::ShapeMismatch, "component path too long");
  if (r.coord_at != fp.coords.size()) fail(Err::ShapeMismatch, "too many coordinates");
  return v;
}

namespace {

void lin_coords_rec(const TypePtr& ty, const ValuePtr& primal, const LinPtr& lin, Vec& out) {
  switch (ty->tag) {
    case TypeTag::Real: {
      if (is_zero(lin)) {
        out.insert(out.end(), ty->width, 0.0);
        return;
      }
      if (lin->tag != LinValue::Tag::Vec ||
          static_cast<int>(lin->vec.size()) != ty->width)
        fail(Err::ShapeMismatch, "tangent width mismatch");
      out.insert(out.end(), lin->vec.begin(), lin->vec.end());
      return;
    }
    case TypeTag::Unit:
      return;
    case TypeTag::Prod: {
      LinPtr a = l_zero(), b = l_zero();
      if (!is_zero(lin)) {
        if (lin->tag != LinValue::Tag::Pair) fail(Err::ShapeMismatch, "tangent pair shape");
        a = lin->a;
        b = lin->b;
      }
      lin_coords_rec(ty->a, primal->a, a, out);
      lin_coords_rec(ty->b, primal->b, b, out);
      return;
    }
    case TypeTag::Variant: {
      int live = -1;
      for (std::size_t i = 0; i < ty->ctors.size(); ++i)
        if (ty->ctors[i].first == primal->label) live = static_cast<int>(i);
      if (live < 0) fail(Err::ShapeMismatch, "unknown constructor " + primal->label);
      LinPtr payload = l_zero();
      if (!is_zero(lin)) {
        if (lin->tag == LinValue::Tag::SumAt) {
          if (lin->index != live + 1)
            fail(Err::MismatchedBranch, "cotangent lives in branch " +
                                            std::to_string(lin->index) + " but the primal is in " +
                                            std::to_string(live + 1));
          payload = lin->a;
        } else if (lin->tag == LinValue::Tag::Tuple) {
          payload = lin->items[live];
        } else {
          fail(Err::ShapeMismatch, "tangent sum shape");
        }
      }
      lin_coords_rec(ty->ctors[live].second, primal->a, payload, out);
      return;
    }
    case TypeTag::Mu: {
      auto unrolled = subst_type(ty->a, ty->name, ty);
      LinPtr inner = l_zero();
      if (!is_zero(lin)) {
        if (lin->tag == LinValue::Tag::Roll)
          inner = lin->a;  // forward-mode tangent, structural
        else if (lin->tag == LinValue::Tag::Codata)
          inner = force_lin(lin);  // reverse-mode cotangent, forced to primal depth
        else
          fail(Err::ShapeMismatch, "tangent mu shape");
      }
      lin_coords_rec(unrolled, primal->a, inner, out);
      return;
    }
    default:
      fail(Err::NotADataType, print_type(ty));
  }
}

LinPtr from_coords_rec(const TypePtr& ty, const ValuePtr& primal, const Vec& coords,
                       std::size_t& at, bool reverse_mode, bool biproduct) {
  switch (ty->tag) {
    case TypeTag::Real: {
      if (at + ty->width > coords.size()) fail(Err::ShapeMismatch, "not enough coordinates");
      Vec xs(coords.begin() + at, coords.begin() + at + ty->width);
      at += ty->width;
      return l_vec(std::move(xs));
    }
    case TypeTag::Unit:
      return l_unit();
    case TypeTag::Prod: {
      auto a = from_coords_rec(ty->a, primal->a, coords, at, reverse_mode, biproduct);
      auto b = from_coords_rec(ty->b, primal->b, coords, at, reverse_mode, biproduct);
      return l_pair(a, b);
    }
    case TypeTag::Variant: {
      for (std::size_t i = 0; i < ty->ctors.size(); ++i)
        if (ty->ctors[i].first == primal->label) {
          auto payload =
              from_coords_rec(ty->ctors[i].second, primal->a, coords, at, reverse_mode, biproduct);
          if (biproduct) {
            std::vector<LinPtr> items(ty->ctors.size(), l_zero());
            items[i] = payload;
            return l_tuple(std::move(items));
          }
          return l_sum_at(static_cast<int>(i) + 1, payload);
        }
      fail(Err::ShapeMismatch, "unknown constructor " + primal->label);
    }
    case TypeTag::Mu: {
      auto unrolled = subst_type(ty->a, ty->name, ty);
      auto inner = from_coords_rec(unrolled, primal->a, coords, at, reverse_mode, biproduct);
      if (reverse_mode) {
        // an already-forced cell: cotangents of mu data are nu values
        return l_codata(nullptr, [inner] { return inner; });
      }
      return l_roll(nullptr, inner);
    }
    default:
      fail(Err::NotADataType, print_type(ty));
  }
}

}  // namespace

Vec lin_coords(const TypePtr& ty, const ValuePtr& primal, const LinPtr& lin) {
  Vec out;
  lin_coords_rec(ty, primal, lin, out);
  return out;
}

LinPtr lin_from_coords(const TypePtr& ty, const ValuePtr& primal, const Vec& coords,
                       bool reverse_mode, bool biproduct) {
  std::size_t at = 0;
  auto l = from_coords_rec(ty, primal, coords, at, reverse_mode, biproduct);
  if (at != coords.size()) fail(Err::ShapeMismatch, "too many coordinates");
  return l;
}

}  // namespace chad
