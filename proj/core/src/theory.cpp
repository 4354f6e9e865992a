#include "gpt/theory.hpp"

#include "gpt/boxworld.hpp"
#include "gpt/classical.hpp"
#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/quantum.hpp"

namespace gpt {

namespace {

int rep_dim_of(const TheoryModel& model, const Shape& shape) {
  if (shape.is_leaf()) return model.leaf_rep_dim(shape.dim);
  if (shape.parts.empty()) fail(ErrorKind::BadShape, "composite shape with no parts");
  int dim = 1;
  for (const Shape& part : shape.parts) dim *= rep_dim_of(model, part);
  return dim;
}

}  // namespace

SystemRef TheoryModel::system(const Shape& shape) const {
  return SystemRef(id(), shape, rep_dim_of(*this, shape));
}

bool TheoryModel::valid_test(const Test& test, double tol) const {
  test.check_structure();
  for (const Transformation& branch : test.branches)
    if (!valid_transformation(branch, tol)) return false;
  const Transformation total = coarse_grain(test.branches);
  // Deterministic: unit pulled back through the total map is again the unit.
  const Vec unit_out = unit_coords(test.output);
  const Vec unit_in = unit_coords(test.input);
  return (total.matrix.transpose() * unit_out - unit_in).cwiseAbs().maxCoeff() <= tol;
}

Vec TheoryModel::unit_coords(const SystemRef& sys) const {
  const Shape& shape = sys.shape();
  if (shape.is_leaf()) return leaf_unit(shape.dim);
  Vec unit = Vec::Ones(1);
  for (const Shape& part : shape.parts)
    unit = linalg::kron(unit, unit_coords(system(part)));
  return unit;
}

const TheoryModel& theory(TheoryId id) {
  switch (id) {
    case TheoryId::Classical: return classical_theory();
    case TheoryId::Quantum: return quantum_theory();
    case TheoryId::Boxworld: return boxworld_theory();
  }
  fail(ErrorKind::UnknownSystem, "unknown theory id");
}

SystemRef make_system(TheoryId id, const Shape& shape) {
  return theory(id).system(shape);
}

SystemRef compose_systems(const SystemRef& a, const SystemRef& b) {
  if (a.theory() != b.theory())
    fail(ErrorKind::TheoryMismatch,
         "composite across theories " + a.str() + " and " + b.str());
  if (a.is_trivial()) return b;
  if (b.is_trivial()) return a;
  return theory(a.theory()).system(Shape::composite({a.shape(), b.shape()}));
}

}  // namespace gpt
