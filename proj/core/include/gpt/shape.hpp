#ifndef GPT_SHAPE_HPP
#define GPT_SHAPE_HPP

#include <string>
#include <vector>

namespace gpt {

enum class TheoryId { Classical, Quantum, Boxworld };

const char* to_string(TheoryId id);
TheoryId theory_id_from_string(const std::string& name);

/// Size descriptor of a system. A leaf carries a dimension d:
///   classical: number of outcomes (d >= 1)
///   quantum:   Hilbert-space dimension (d >= 1)
///   boxworld:  d == 1 is the trivial system, d == 2 is a gbit
/// A composite is an ordered list of component shapes. d == 1 leaves are the
/// trivial system in every theory.
struct Shape {
  int dim = 1;
  std::vector<Shape> parts;  // non-empty <=> composite

  static Shape leaf(int d) { return Shape{d, {}}; }
  static Shape trivial() { return leaf(1); }
  static Shape gbit() { return leaf(2); }
  static Shape composite(std::vector<Shape> parts) { return Shape{0, std::move(parts)}; }

  bool is_leaf() const { return parts.empty(); }
  bool is_trivial() const { return is_leaf() && dim == 1; }

  bool operator==(const Shape& other) const;
  bool operator!=(const Shape& other) const { return !(*this == other); }

  std::string str() const;
};

/// A typed wire label: which theory owns the system and its shape. rep_dim is
/// the dimension of the real coordinate space the theory assigns to it.
class SystemRef {
public:
  SystemRef() : theory_(TheoryId::Classical), shape_(Shape::trivial()), rep_dim_(1) {}
  SystemRef(TheoryId theory, Shape shape, int rep_dim)
      : theory_(theory), shape_(std::move(shape)), rep_dim_(rep_dim) {}

  TheoryId theory() const { return theory_; }
  const Shape& shape() const { return shape_; }
  int rep_dim() const { return rep_dim_; }
  bool is_trivial() const { return shape_.is_trivial() && rep_dim_ == 1; }
  bool is_composite() const { return !shape_.is_leaf(); }
  std::size_t component_count() const { return shape_.is_leaf() ? 1 : shape_.parts.size(); }

  bool operator==(const SystemRef& other) const {
    return theory_ == other.theory_ && shape_ == other.shape_;
  }
  bool operator!=(const SystemRef& other) const { return !(*this == other); }

  std::string str() const;

private:
  TheoryId theory_;
  Shape shape_;
  int rep_dim_;
};

}  // namespace gpt

#endif
