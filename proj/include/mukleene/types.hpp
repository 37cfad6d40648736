#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mukleene {

// Finite type over the naturals. The ground type N has an empty argument
// list; an arrow type (s1,...,sk -> N) stores its argument types. Result
// types are always ground, so applying one argument drops the head of the
// list. Rank: 0 for N, otherwise 1 + max rank of the arguments.
class FiniteType {
public:
  FiniteType() = default;  // ground N
  explicit FiniteType(std::vector<FiniteType> args) : args_(std::move(args)) {}

  static FiniteType ground() { return FiniteType(); }
  static FiniteType fun(std::vector<FiniteType> args) { return FiniteType(std::move(args)); }
  // Arrow from argument type to (possibly arrow) result: prepends arg.
  static FiniteType arrow(const FiniteType& arg, const FiniteType& result);

  bool is_ground() const { return args_.empty(); }
  const std::vector<FiniteType>& args() const { return args_; }
  int rank() const;
  // Type after consuming the first argument.
  FiniteType drop_first() const;

  std::string str() const;  // "N" or "(-> s1 ... sk N)"
  static FiniteType parse(const std::string& src);

  bool operator==(const FiniteType& o) const { return args_ == o.args_; }
  bool operator!=(const FiniteType& o) const { return !(*this == o); }
  bool operator<(const FiniteType& o) const;  // arbitrary total order for maps

  size_t hash() const;

private:
  std::vector<FiniteType> args_;
};

}  // namespace mukleene
