#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "klcells/errors.hpp"

namespace klcells {

// A Coxeter matrix with positive integer weights, restricted to bond orders
// {2,3,4,6,inf} so the reflection representation is exact over the integers.
// Bond order infinity is encoded as 0.
struct CoxeterSystem {
  int rank = 0;
  std::vector<std::string> labels;       // generator names, declaration order
  std::vector<std::vector<int>> m;       // Coxeter matrix, 0 = infinity
  std::vector<long> weights;             // L(s) per generator
  std::vector<std::vector<long>> cartan; // cartan[i][j] = <alpha_j, alpha_i%>

  long weight(int s) const { return weights[static_cast<size_t>(s)]; }

  int generator_index(const std::string& name) const {
    for (int i = 0; i < rank; ++i)
      if (labels[static_cast<size_t>(i)] == name) return i;
    throw KlError(ErrorCode::ConfigError, "unknown generator " + name);
  }
};

// Validates the matrix/weights and fixes the integer Cartan table:
// for i < j the pair (cartan[i][j], cartan[j][i]) is (0,0), (-1,-1),
// (-1,-2), (-1,-3), (-2,-2) for m = 2, 3, 4, 6, infinity.
inline CoxeterSystem build_system(std::vector<std::vector<int>> matrix,
                                  std::vector<long> weights,
                                  std::vector<std::string> labels = {}) {
  CoxeterSystem sys;
  sys.rank = static_cast<int>(matrix.size());
  size_t n = matrix.size();
  if (weights.size() != n)
    throw KlError(ErrorCode::ConfigError, "weights/matrix size mismatch");
  for (size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n)
      throw KlError(ErrorCode::NonSymmetricMatrix, "matrix is not square");
    if (matrix[i][i] != 1)
      throw KlError(ErrorCode::UnsupportedBondOrder, "diagonal must be 1");
    if (weights[i] <= 0)
      throw KlError(ErrorCode::InvalidWeight, "weights must be positive");
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (matrix[i][j] != matrix[j][i])
        throw KlError(ErrorCode::NonSymmetricMatrix,
                      "m[i][j] != m[j][i] at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      int mij = matrix[i][j];
      if (mij != 0 && mij != 2 && mij != 3 && mij != 4 && mij != 6)
        throw KlError(ErrorCode::UnsupportedBondOrder,
                      "bond order " + std::to_string(mij));
      if (mij != 0 && mij % 2 == 1 && weights[i] != weights[j])
        throw KlError(ErrorCode::WeightConjugacyViolation,
                      "odd bond between generators of unequal weight (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
    }
  sys.m = std::move(matrix);
  sys.weights = std::move(weights);
  if (labels.empty())
    for (size_t i = 0; i < n; ++i)
      labels.push_back("s" + std::to_string(i + 1));
  if (labels.size() != n)
    throw KlError(ErrorCode::ConfigError, "labels/matrix size mismatch");
  sys.labels = std::move(labels);

  sys.cartan.assign(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i) sys.cartan[i][i] = 2;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      long a = 0, b = 0;
      switch (sys.m[i][j]) {
        case 2: a = 0; b = 0; break;
        case 3: a = -1; b = -1; break;
        case 4: a = -1; b = -2; break;
        case 6: a = -1; b = -3; break;
        case 0: a = -2; b = -2; break;
      }
      sys.cartan[i][j] = a;  // <alpha_j, alpha_i%>
      sys.cartan[j][i] = b;  // <alpha_i, alpha_j%>
    }
  return sys;
}

namespace detail {

struct MatKey {
  std::vector<long long> a;
  bool operator==(const MatKey& o) const { return a == o.a; }
};

struct MatKeyHash {
  size_t operator()(const MatKey& k) const {
    uint64_t h = 1469598103934665603ull;
    for (long long x : k.a) {
      uint64_t u = static_cast<uint64_t>(x);
      for (int i = 0; i < 8; ++i) {
        h ^= (u >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace detail

// Enumerated ball {w : l(w) <= radius} with generator transition tables,
// canonical ShortLex reduced words, descent masks, inverses, and memoized
// Bruhat order. Elements are dense indices sorted by (length, word).
// Immutable after construction.
class BallTable {
 public:
  static constexpr int out_of_ball = -1;

  BallTable(CoxeterSystem sys, int radius, size_t element_cap = 4000000)
      : sys_(std::move(sys)), radius_(radius) {
    if (radius < 0)
      throw KlError(ErrorCode::ConfigError, "radius must be >= 0");
    enumerate(element_cap);
    canonicalize();
    build_inverses();
    build_bruhat();
  }

  const CoxeterSystem& system() const { return sys_; }
  int radius() const { return radius_; }
  int size() const { return static_cast<int>(length_.size()); }
  int rank() const { return sys_.rank; }

  int length(int w) const { return length_[static_cast<size_t>(w)]; }
  int left(int w, int s) const {
    return left_[static_cast<size_t>(w) * static_cast<size_t>(sys_.rank) +
                 static_cast<size_t>(s)];
  }
  int right(int w, int s) const {
    return right_[static_cast<size_t>(w) * static_cast<size_t>(sys_.rank) +
                  static_cast<size_t>(s)];
  }
  uint32_t left_descents(int w) const {
    return ldesc_[static_cast<size_t>(w)];
  }
  uint32_t right_descents(int w) const {
    return rdesc_[static_cast<size_t>(w)];
  }
  bool is_left_descent(int w, int s) const {
    return (left_descents(w) >> s) & 1u;
  }
  bool is_right_descent(int w, int s) const {
    return (right_descents(w) >> s) & 1u;
  }
  const std::vector<int>& word(int w) const {
    return word_[static_cast<size_t>(w)];
  }
  int invert(int w) const { return inverse_[static_cast<size_t>(w)]; }

  // Product of a ball element and a generator word, out_of_ball on escape.
  int apply_word(int w, const std::vector<int>& letters) const {
    for (int s : letters) {
      if (w == out_of_ball) return out_of_ball;
      w = right(w, s);
    }
    return w;
  }

  int element_of(const std::vector<int>& letters) const {
    return apply_word(0, letters);
  }

  // Group product; out_of_ball if the result escapes the ball.
  int mul(int a, int b) const { return apply_word(a, word(b)); }

  bool bruhat_leq(int y, int w) const {
    if (length_[static_cast<size_t>(y)] > length_[static_cast<size_t>(w)])
      return false;
    return bruhat_[static_cast<size_t>(w)]
                  [static_cast<size_t>(y) >> 6] >>
               (static_cast<size_t>(y) & 63) &
           1ull;
  }

  std::string word_str(int w) const {
    const auto& ww = word(w);
    if (ww.empty()) return "e";
    std::string out;
    for (size_t i = 0; i < ww.size(); ++i) {
      if (i) out += '.';
      out += sys_.labels[static_cast<size_t>(ww[i])];
    }
    return out;
  }

  // Parses "e" or "s1.s2.s1" to a ball element.
  int parse_word(const std::string& text) const {
    if (text.empty() || text == "e") return 0;
    std::vector<int> letters;
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t dot = text.find('.', pos);
      if (dot == std::string::npos) dot = text.size();
      letters.push_back(sys_.generator_index(text.substr(pos, dot - pos)));
      pos = dot + 1;
      if (dot == text.size()) break;
    }
    int w = element_of(letters);
    if (w == out_of_ball)
      throw KlError(ErrorCode::SupportEscapesBall,
                    "word " + text + " leaves the ball");
    return w;
  }

 private:
  using Mat = std::vector<long long>;

  Mat identity_mat() const {
    size_t n = static_cast<size_t>(sys_.rank);
    Mat m(n * n, 0);
    for (size_t i = 0; i < n; ++i) m[i * n + i] = 1;
    return m;
  }

  // Column j of the generator matrix is the image of basis vector alpha_j:
  // sigma_i(alpha_j) = alpha_j - cartan[i][j] * alpha_i.
  Mat generator_mat(int s) const {
    size_t n = static_cast<size_t>(sys_.rank);
    Mat m = identity_mat();
    for (size_t j = 0; j < n; ++j)
      m[static_cast<size_t>(s) * n + j] -=
          sys_.cartan[static_cast<size_t>(s)][j];
    return m;
  }

  Mat mat_mul(const Mat& a, const Mat& b) const {
    size_t n = static_cast<size_t>(sys_.rank);
    Mat c(n * n, 0);
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) {
        long long aik = a[i * n + k];
        if (aik == 0) continue;
        for (size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
      }
    return c;
  }

  void enumerate(size_t cap) {
    size_t n = static_cast<size_t>(sys_.rank);
    std::vector<Mat> gen(n);
    for (size_t s = 0; s < n; ++s) gen[s] = generator_mat(static_cast<int>(s));

    std::unordered_map<detail::MatKey, int, detail::MatKeyHash> index;
    std::vector<Mat> mats;
    mats.push_back(identity_mat());
    index[{mats[0]}] = 0;
    length_.push_back(0);

    std::vector<int> frontier{0};
    for (int len = 0; len < radius_; ++len) {
      std::vector<int> next;
      for (int w : frontier)
        for (size_t s = 0; s < n; ++s) {
          Mat p = mat_mul(mats[static_cast<size_t>(w)], gen[s]);
          detail::MatKey key{std::move(p)};
          auto it = index.find(key);
          if (it == index.end()) {
            if (mats.size() >= cap)
              throw KlError(ErrorCode::ElementCapExceeded,
                            "ball exceeds element cap of " +
                                std::to_string(cap));
            int id = static_cast<int>(mats.size());
            mats.push_back(key.a);
            index.emplace(std::move(key), id);
            length_.push_back(len + 1);
            next.push_back(id);
          }
        }
      frontier = std::move(next);
    }

    size_t count = mats.size();
    right_.assign(count * n, out_of_ball);
    left_.assign(count * n, out_of_ball);
    for (size_t w = 0; w < count; ++w)
      for (size_t s = 0; s < n; ++s) {
        auto itr = index.find({mat_mul(mats[w], gen[s])});
        if (itr != index.end()) right_[w * n + s] = itr->second;
        auto itl = index.find({mat_mul(gen[s], mats[w])});
        if (itl != index.end()) left_[w * n + s] = itl->second;
      }
  }

  // Computes descent masks and ShortLex words, then renumbers all tables so
  // elements are sorted by (length, word).
  void canonicalize() {
    size_t count = length_.size();
    size_t n = static_cast<size_t>(sys_.rank);

    auto descent_masks = [&](std::vector<uint32_t>& ld,
                             std::vector<uint32_t>& rd) {
      ld.assign(count, 0);
      rd.assign(count, 0);
      for (size_t w = 0; w < count; ++w)
        for (size_t s = 0; s < n; ++s) {
          int lw = left_[w * n + s];
          if (lw != out_of_ball &&
              length_[static_cast<size_t>(lw)] < length_[w])
            ld[w] |= 1u << s;
          int rw = right_[w * n + s];
          if (rw != out_of_ball &&
              length_[static_cast<size_t>(rw)] < length_[w])
            rd[w] |= 1u << s;
        }
    };
    descent_masks(ldesc_, rdesc_);

    word_.assign(count, {});
    for (size_t w = 0; w < count; ++w) {
      std::vector<int> letters;
      int cur = static_cast<int>(w);
      while (length_[static_cast<size_t>(cur)] > 0) {
        uint32_t mask = ldesc_[static_cast<size_t>(cur)];
        int s = std::countr_zero(mask);
        letters.push_back(s);
        cur = left_[static_cast<size_t>(cur) * n + static_cast<size_t>(s)];
      }
      word_[w] = std::move(letters);
    }

    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      size_t ua = static_cast<size_t>(a), ub = static_cast<size_t>(b);
      if (length_[ua] != length_[ub]) return length_[ua] < length_[ub];
      return word_[ua] < word_[ub];
    });
    std::vector<int> rank_of(count);
    for (size_t i = 0; i < count; ++i)
      rank_of[static_cast<size_t>(order[i])] = static_cast<int>(i);

    auto permute_int = [&](std::vector<int>& v) {
      std::vector<int> out(count);
      for (size_t i = 0; i < count; ++i)
        out[i] = v[static_cast<size_t>(order[i])];
      v = std::move(out);
    };
    permute_int(length_);
    std::vector<std::vector<int>> words(count);
    for (size_t i = 0; i < count; ++i)
      words[i] = std::move(word_[static_cast<size_t>(order[i])]);
    word_ = std::move(words);
    std::vector<uint32_t> ld(count), rd(count);
    for (size_t i = 0; i < count; ++i) {
      ld[i] = ldesc_[static_cast<size_t>(order[i])];
      rd[i] = rdesc_[static_cast<size_t>(order[i])];
    }
    ldesc_ = std::move(ld);
    rdesc_ = std::move(rd);

    auto remap_table = [&](std::vector<int>& t) {
      std::vector<int> out(count * n);
      for (size_t i = 0; i < count; ++i)
        for (size_t s = 0; s < n; ++s) {
          int x = t[static_cast<size_t>(order[i]) * n + s];
          out[i * n + s] =
              x == out_of_ball ? out_of_ball : rank_of[static_cast<size_t>(x)];
        }
      t = std::move(out);
    };
    remap_table(left_);
    remap_table(right_);
  }

  void build_inverses() {
    size_t count = length_.size();
    inverse_.assign(count, 0);
    for (size_t w = 0; w < count; ++w) {
      std::vector<int> rev(word_[w].rbegin(), word_[w].rend());
      inverse_[w] = element_of(rev);
    }
  }

  // bruhat_[w] is a bitset over ball indices: {y : y <= w}. Filled in index
  // order (index order refines length order) via the lifting recursion with
  // s the first letter of the canonical word of w.
  void build_bruhat() {
    size_t count = length_.size();
    size_t stride = (count + 63) / 64;
    bruhat_.assign(count, std::vector<uint64_t>(stride, 0));
    bruhat_[0][0] = 1;  // e <= e
    for (size_t w = 1; w < count; ++w) {
      int s = word_[w][0];
      size_t sw = static_cast<size_t>(
          left_[w * static_cast<size_t>(sys_.rank) + static_cast<size_t>(s)]);
      const auto& base = bruhat_[sw];
      auto& row = bruhat_[w];
      for (size_t y = 0; y < count; ++y) {
        if (length_[y] > length_[w]) break;
        size_t z = static_cast<size_t>(
            (ldesc_[y] >> s) & 1u
                ? left_[y * static_cast<size_t>(sys_.rank) +
                        static_cast<size_t>(s)]
                : static_cast<int>(y));
        if (base[z >> 6] >> (z & 63) & 1ull) row[y >> 6] |= 1ull << (y & 63);
      }
    }
  }

  CoxeterSystem sys_;
  int radius_;
  std::vector<int> length_;
  std::vector<int> left_, right_;  // row-major [element][generator]
  std::vector<uint32_t> ldesc_, rdesc_;
  std::vector<std::vector<int>> word_;
  std::vector<int> inverse_;
  std::vector<std::vector<uint64_t>> bruhat_;
};

// Minimal-coset machinery for a standard parabolic subgroup W_J.
struct CosetData {
  uint32_t J = 0;
  std::vector<int> parabolic;  // W_J as ball indices, sorted
  std::vector<int> reps;       // X_J cap ball: no right descent inside J
  int longest = 0;             // w0(W_J)
};

// Requires W_J to close inside the ball (finite and fully enumerated).
inline CosetData coset_data(const BallTable& ball, uint32_t J) {
  CosetData out;
  out.J = J;
  std::vector<int> stack{0};
  std::vector<char> seen(static_cast<size_t>(ball.size()), 0);
  seen[0] = 1;
  while (!stack.empty()) {
    int w = stack.back();
    stack.pop_back();
    out.parabolic.push_back(w);
    for (int s = 0; s < ball.rank(); ++s) {
      if (!((J >> s) & 1u)) continue;
      int ws = ball.right(w, s);
      if (ws == BallTable::out_of_ball)
        throw KlError(ErrorCode::ParabolicNotClosedInBall,
                      "W_J escapes the ball at " + ball.word_str(w));
      if (!seen[static_cast<size_t>(ws)]) {
        seen[static_cast<size_t>(ws)] = 1;
        stack.push_back(ws);
      }
    }
  }
  std::sort(out.parabolic.begin(), out.parabolic.end());
  out.longest = out.parabolic.back();
  for (int w = 0; w < ball.size(); ++w)
    if ((ball.right_descents(w) & J) == 0) out.reps.push_back(w);
  return out;
}

// J subset of the right (resp. left) descent set.
inline bool in_RJ(const BallTable& ball, int w, uint32_t J) {
  return (ball.right_descents(w) & J) == J;
}
inline bool in_LJ(const BallTable& ball, int w, uint32_t J) {
  return (ball.left_descents(w) & J) == J;
}

// Factors w = x.u with u in W_J, x a minimal coset representative.
// Both factors always exist inside the ball since lengths only decrease.
inline std::pair<int, int> coset_factorize(const BallTable& ball, int w,
                                           uint32_t J) {
  std::vector<int> letters;
  int x = w;
  for (;;) {
    uint32_t d = ball.right_descents(x) & J;
    if (!d) break;
    int s = std::countr_zero(d);
    letters.push_back(s);
    x = ball.right(x, s);
  }
  std::reverse(letters.begin(), letters.end());
  return {x, ball.element_of(letters)};
}

// The standard G2-affine test system used throughout: bonds m12=6, m23=3,
// m13=2 and weights (a, b, b).
inline CoxeterSystem g2_affine_system(long a, long b) {
  return build_system({{1, 6, 2}, {6, 1, 3}, {2, 3, 1}}, {a, b, b},
                      {"s1", "s2", "s3"});
}

}  // namespace klcells
