#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "plectic/base.hpp"

namespace plectic {

/// A permutation of {0, ..., n-1}, stored as its image table.  Composition
/// follows function application: (a*b)(x) = a(b(x)).  Text form is 1-based
/// disjoint cycle notation, e.g. "(1 2 3 4)(5 6)"; the identity is "()".
class Perm {
 public:
  explicit Perm(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
      require(v >= 0 && v < static_cast<int>(images_.size()),
              "permutation image out of range");
      require(!seen[v], "permutation image repeated; not a bijection");
      seen[v] = 1;
    }
  }

  static Perm identity(int degree) {
    std::vector<int> im(degree);
    std::iota(im.begin(), im.end(), 0);
    return Perm(std::move(im));
  }

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int point) const { return images_[point]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  Perm inverse() const {
    std::vector<int> im(images_.size());
    for (int i = 0; i < degree(); ++i) im[images_[i]] = i;
    return Perm(std::move(im));
  }

  friend Perm operator*(const Perm& a, const Perm& b) {
    require(a.degree() == b.degree(), "composing permutations of unequal degree");
    std::vector<int> im(a.images_.size());
    for (int i = 0; i < a.degree(); ++i) im[i] = a.images_[b.images_[i]];
    return Perm(std::move(im));
  }

  friend bool operator==(const Perm& a, const Perm& b) = default;
  friend std::strong_ordering operator<=>(const Perm& a, const Perm& b) = default;

  /// 1-based disjoint cycle string; cycles ordered by smallest moved point,
  /// each cycle rotated to start at its smallest point; fixed points omitted.
  std::string cycles() const {
    std::string out;
    std::vector<char> done(images_.size(), 0);
    for (int i = 0; i < degree(); ++i) {
      if (done[i] || images_[i] == i) continue;
      out += '(';
      int p = i;
      bool first = true;
      do {
        if (!first) out += ' ';
        out += std::to_string(p + 1);
        done[p] = 1;
        p = images_[p];
        first = false;
      } while (p != i);
      out += ')';
    }
    if (out.empty()) out = "()";
    return out;
  }

  /// Parses 1-based disjoint cycle notation over a fixed degree.  Points not
  /// mentioned are fixed.  "()" (or only whitespace between cycles) is the
  /// identity.  Rejects out-of-range and repeated points.
  static Perm parse_cycles(const std::string& text, int degree) {
    std::vector<int> im(degree);
    std::iota(im.begin(), im.end(), 0);
    std::vector<char> used(degree, 0);
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    require(i < text.size(), "empty permutation text");
    while (i < text.size()) {
      require(text[i] == '(', "expected '(' in cycle notation");
      ++i;
      std::vector<int> cyc;
      skip_ws();
      while (i < text.size() && text[i] != ')') {
        require(std::isdigit(static_cast<unsigned char>(text[i])),
                "expected point number in cycle notation");
        int v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          v = v * 10 + (text[i] - '0');
          ++i;
        }
        require(v >= 1 && v <= degree, "cycle point out of range 1..degree");
        require(!used[v - 1], "point repeated in cycle notation");
        used[v - 1] = 1;
        cyc.push_back(v - 1);
        skip_ws();
      }
      require(i < text.size() && text[i] == ')', "unterminated cycle");
      ++i;
      require(cyc.size() != 1, "singleton cycle is not meaningful");
      for (std::size_t k = 0; k < cyc.size(); ++k)
        im[cyc[k]] = cyc[(k + 1) % cyc.size()];
      skip_ws();
    }
    return Perm(std::move(im));
  }

 private:
  std::vector<int> images_;
};

}  // namespace plectic
