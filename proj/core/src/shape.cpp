#include "gpt/shape.hpp"

#include <sstream>

#include "gpt/errors.hpp"

namespace gpt {

const char* to_string(TheoryId id) {
  switch (id) {
    case TheoryId::Classical: return "classical";
    case TheoryId::Quantum: return "quantum";
    case TheoryId::Boxworld: return "boxworld";
  }
  return "?";
}

TheoryId theory_id_from_string(const std::string& name) {
  if (name == "classical") return TheoryId::Classical;
  if (name == "quantum") return TheoryId::Quantum;
  if (name == "boxworld") return TheoryId::Boxworld;
  fail(ErrorKind::UnknownName, "no theory named '" + name + "'");
}

bool Shape::operator==(const Shape& other) const {
  if (parts.size() != other.parts.size()) return false;
  if (parts.empty()) return dim == other.dim;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (!(parts[i] == other.parts[i])) return false;
  return true;
}

std::string Shape::str() const {
  if (is_leaf()) return std::to_string(dim);
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out << ",";
    out << parts[i].str();
  }
  out << "]";
  return out.str();
}

std::string SystemRef::str() const {
  return std::string(to_string(theory_)) + "(" + shape_.str() + ")";
}

}  // namespace gpt
