#pragma once

// The category O, presented by face maps modulo the Inner/Glob1/Glob2/Degen squares.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "opetopes/opetope.hpp"

namespace opetopes {

// A generating face map into some opetope: t, or s_[p].
struct Face {
  bool is_target = false;
  Address addr;

  static Face t() { return Face{true, Address()}; }
  static Face s(Address a) { return Face{false, std::move(a)}; }
  std::string str() const;
  auto operator<=>(const Face& o) const = default;
  bool operator==(const Face& o) const = default;
};

using FaceWord = std::vector<Face>;  // outermost face first

std::string word_str(const FaceWord& w);

// Generating faces into w: sources in address order, then the target.
std::vector<Face> faces(const Opetope& w);
Opetope face_domain(const Opetope& w, const Face& f);
Opetope word_domain(const Opetope& w, const FaceWord& word);

// (g1 then g2) ~ (h1 then h2) at w, read as g1 o g2 = h1 o h2.
struct RelationSquare {
  std::string name;
  Face g1, g2, h1, h2;
};
std::vector<RelationSquare> relation_squares(const Opetope& w);

struct OMorphism {
  Opetope dom;
  Opetope cod;
  FaceWord word;  // normal form
  std::string str() const;
  auto operator<=>(const OMorphism& o) const = default;
  bool operator==(const OMorphism& o) const = default;
};

// Every morphism into a fixed opetope, as classes of face words.
class HomTable {
 public:
  explicit HomTable(const Opetope& root);

  const Opetope& root() const { return root_; }
  // All morphisms into root, longest words last; the identity comes first.
  const std::vector<OMorphism>& morphisms() const { return morphisms_; }
  std::vector<OMorphism> from(const Opetope& dom) const;
  // Index into morphisms() of the class of a word; -1 if the word is not composable.
  int class_of(const FaceWord& word) const;
  const OMorphism& normal(const FaceWord& word) const;
  std::size_t word_count() const { return words_.size(); }

 private:
  Opetope root_;
  std::map<FaceWord, int> index_;
  std::vector<FaceWord> words_;
  std::vector<int> class_;  // word -> morphism index
  std::vector<OMorphism> morphisms_;
};

std::shared_ptr<const HomTable> hom_table(const Opetope& w);
std::vector<OMorphism> hom(const Opetope& psi, const Opetope& w);

OMorphism identity(const Opetope& w);
OMorphism generator(const Opetope& w, const Face& f);
// f o g
OMorphism compose(const OMorphism& f, const OMorphism& g);

}  // namespace opetopes
