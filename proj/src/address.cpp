#include "opetopes/address.hpp"

#include <cctype>

#include "opetopes/error.hpp"

namespace opetopes {

Address Address::star() {
  Address a;
  a.star_ = true;
  return a;
}

Address Address::list(std::vector<Address> items) {
  Address a;
  a.items_ = std::move(items);
  return a;
}

Address Address::push(const Address& q) const {
  Address a = *this;
  a.items_.push_back(q);
  return a;
}

Address Address::concat(const Address& other) const {
  Address a = *this;
  a.items_.insert(a.items_.end(), other.items_.begin(), other.items_.end());
  return a;
}

Address Address::prefix(std::size_t n) const {
  return list(std::vector<Address>(items_.begin(), items_.begin() + n));
}

Address Address::suffix(std::size_t from) const {
  return list(std::vector<Address>(items_.begin() + from, items_.end()));
}

bool Address::is_prefix_of(const Address& other) const {
  if (star_ || other.star_) return star_ && other.star_;
  if (items_.size() > other.items_.size()) return false;
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (!(items_[i] == other.items_[i])) return false;
  return true;
}

std::string Address::str() const {
  if (star_) return "*";
  std::string s = "[";
  for (const auto& i : items_) s += i.str();
  return s + "]";
}

namespace {

Address parse_at(std::string_view s, std::size_t& i) {
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip();
  if (i >= s.size()) throw Error(ErrorKind::ParseError, "address expected at end of input");
  if (s[i] == '*') {
    ++i;
    return Address::star();
  }
  if (s[i] != '[') throw Error(ErrorKind::ParseError, "address expected at offset " + std::to_string(i));
  ++i;
  std::vector<Address> items;
  for (;;) {
    skip();
    if (i >= s.size()) throw Error(ErrorKind::ParseError, "unterminated address");
    if (s[i] == ']') {
      ++i;
      break;
    }
    items.push_back(parse_at(s, i));
  }
  return Address::list(std::move(items));
}

}  // namespace

Address Address::parse(std::string_view s) {
  std::size_t i = 0;
  Address a = parse_at(s, i);
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i != s.size()) throw Error(ErrorKind::ParseError, "trailing input after address");
  return a;
}

std::strong_ordering Address::operator<=>(const Address& o) const {
  if (star_ != o.star_) return star_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (star_) return std::strong_ordering::equal;
  if (items_.size() != o.items_.size()) return items_.size() <=> o.items_.size();
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (auto c = items_[i] <=> o.items_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

bool Address::operator==(const Address& o) const { return (*this <=> o) == 0; }

Address stars(std::size_t k) { return Address::list(std::vector<Address>(k, Address::star())); }

}  // namespace opetopes
