#pragma once

// Higher addresses: the 0-address `*`, or a finite list of addresses of one lower depth.

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace opetopes {

class Address {
 public:
  Address() = default;  // the empty list []
  static Address star();
  static Address list(std::vector<Address> items);

  bool is_star() const { return star_; }
  const std::vector<Address>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return !star_ && items_.empty(); }
  const Address& operator[](std::size_t i) const { return items_[i]; }
  const Address& back() const { return items_.back(); }

  // [p] -> [p[q]]
  Address push(const Address& q) const;
  // [p][q] -> [pq]
  Address concat(const Address& other) const;
  Address prefix(std::size_t n) const;
  Address suffix(std::size_t from) const;
  bool is_prefix_of(const Address& other) const;

  std::string str() const;
  static Address parse(std::string_view s);  // throws Error(ParseError)

  // Shorter lists first, then lexicographic; `*` precedes every list.
  std::strong_ordering operator<=>(const Address& o) const;
  bool operator==(const Address& o) const;

 private:
  bool star_ = false;
  std::vector<Address> items_;
};

// [*^k]
Address stars(std::size_t k);

}  // namespace opetopes
