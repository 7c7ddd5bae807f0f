/// @file permrep.hpp
/// @brief Permutation groups: deterministic Schreier-Sims with explicit
///        transversals, element enumeration, canonical coset
///        representatives, conjugacy-class orbits with conjugator
///        witnesses, subgroup meeting tests, actions on subspaces, and
///        primitivity.
///
/// Composition convention: permutations act on the right and compose left
/// to right, (p * q)(i) = q(p(i)). Conjugation is x^g = g^{-1} x g.
///
/// The stabilizer chain uses the full natural base (0, 1, ..., n-1); levels
/// whose orbit is trivial cost nothing. This makes two strong guarantees
/// structural: an element of the group is determined by its images on the
/// base points with nontrivial orbits, and the greedy transversal descent
/// in canonical_coset_rep returns the true lexicographic minimum of a
/// coset's image tuples.

#ifndef DERANGE_PERMREP_HPP
#define DERANGE_PERMREP_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "derange/linalg.hpp"

namespace derange {

using Perm = std::vector<u32>;

inline Perm perm_identity(u32 n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline bool perm_is_identity(const Perm& p) {
  for (u32 i = 0; i < p.size(); ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

inline void perm_validate(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (u32 v : p) {
    DERANGE_REQUIRE(v < p.size() && !seen[v], "perm: not a bijection");
    seen[v] = true;
  }
}

/// (p * q)(i) = q(p(i)): apply p first, then q.
inline Perm perm_mul(const Perm& p, const Perm& q) {
  DERANGE_CHECK(p.size() == q.size(), "perm_mul: degree mismatch");
  Perm r(p.size());
  for (u32 i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

inline Perm perm_inv(const Perm& p) {
  Perm r(p.size());
  for (u32 i = 0; i < p.size(); ++i) r[p[i]] = i;
  return r;
}

/// x^g = g^{-1} x g.
inline Perm perm_conj(const Perm& x, const Perm& g) {
  DERANGE_CHECK(x.size() == g.size(), "perm_conj: degree mismatch");
  Perm r(x.size());
  for (u32 i = 0; i < x.size(); ++i) r[g[i]] = g[x[i]];
  return r;
}

inline Perm perm_pow(Perm base, u64 e) {
  Perm r = perm_identity(u32(base.size()));
  while (e > 0) {
    if (e & 1) r = perm_mul(r, base);
    base = perm_mul(base, base);
    e >>= 1;
  }
  return r;
}

inline u64 perm_order(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  u64 ord = 1;
  for (u32 i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    u64 len = 0;
    u32 j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = p[j];
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

inline std::vector<u32> fixed_points(const Perm& p) {
  std::vector<u32> out;
  for (u32 i = 0; i < p.size(); ++i) {
    if (p[i] == i) out.push_back(i);
  }
  return out;
}

/// Cycle notation for diagnostics, e.g. "(0 2 1)(3 4)"; identity is "()".
inline std::string perm_cycles_string(const Perm& p) {
  std::string s;
  std::vector<bool> seen(p.size(), false);
  for (u32 i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) {
      seen[i] = true;
      continue;
    }
    s.push_back('(');
    u32 j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) s.push_back(' ');
      s += std::to_string(j);
      first = false;
      j = p[j];
    }
    s.push_back(')');
  }
  return s.empty() ? "()" : s;
}

// ---- stabilizer chain -----------------------------------------------------

/// Deterministic Schreier-Sims over the full natural base. Transversal
/// elements are stored explicitly as permutations.
class BSGS {
 public:
  struct Level {
    u32 beta = 0;
    std::vector<Perm> gens;          // generators of this stabilizer level
    std::map<u32, Perm> transversal;  // orbit point -> u with u(beta) = point
  };

  BSGS(u32 degree, std::vector<Perm> generators) : n_(degree) {
    levels_.resize(n_);
    for (u32 i = 0; i < n_; ++i) levels_[i].beta = i;
    for (auto& g : generators) {
      DERANGE_REQUIRE(g.size() == n_, "BSGS: generator degree mismatch");
      perm_validate(g);
      if (!perm_is_identity(g)) levels_[0].gens.push_back(std::move(g));
    }
    if (n_ > 0) complete_level(0);
    order_ = 1;
    for (const auto& lv : levels_) {
      if (!lv.transversal.empty()) {
        order_ = checked_mul(order_, u64(lv.transversal.size()));
      }
    }
    for (u32 i = 0; i < n_; ++i) {
      if (levels_[i].transversal.size() > 1) nontrivial_base_.push_back(i);
    }
  }

  u32 degree() const { return n_; }
  u64 order() const { return order_; }
  const std::vector<Level>& levels() const { return levels_; }
  const std::vector<u32>& nontrivial_base() const { return nontrivial_base_; }

  bool contains(const Perm& g) const {
    if (g.size() != n_) return false;
    auto [res, lev] = strip(g, 0);
    (void)lev;
    return perm_is_identity(res);
  }

  /// Sifts g through levels starting at `from`; returns the residue and the
  /// level where sifting stopped (levels_.size() on a full walk).
  std::pair<Perm, size_t> strip(Perm g, size_t from) const {
    for (size_t l = from; l < levels_.size(); ++l) {
      const u32 gamma = g[levels_[l].beta];
      if (gamma == levels_[l].beta) continue;
      auto it = levels_[l].transversal.find(gamma);
      if (it == levels_[l].transversal.end()) return {std::move(g), l};
      g = perm_mul(g, perm_inv(it->second));
    }
    return {std::move(g), levels_.size()};
  }

  /// Images of g at the nontrivial base points, byte-packed; elements of
  /// the group are uniquely determined by this key.
  std::string base_image_key(const Perm& g) const {
    DERANGE_CHECK(g.size() == n_, "base_image_key: degree mismatch");
    std::string key;
    if (n_ <= 255) {
      key.reserve(nontrivial_base_.size());
      for (u32 b : nontrivial_base_) key.push_back(char(u8(g[b])));
    } else {
      DERANGE_REQUIRE(n_ <= 65535, "base_image_key: degree above 2^16");
      key.reserve(2 * nontrivial_base_.size());
      for (u32 b : nontrivial_base_) {
        key.push_back(char(u8(g[b] & 0xff)));
        key.push_back(char(u8(g[b] >> 8)));
      }
    }
    return key;
  }

  /// Visits every group element exactly once (product of transversal
  /// elements over the chain, deepest level first). Deterministic order.
  template <typename Fn>
  void for_each_element(Fn&& fn) const {
    std::vector<const Level*> active;
    for (const auto& lv : levels_) {
      if (lv.transversal.size() > 1) active.push_back(&lv);
    }
    Perm acc = perm_identity(n_);
    enumerate_rec(active, active.size(), acc, fn);
  }

  /// The lexicographically least element of the right coset (this group)*g,
  /// comparing full image tuples (r(0), r(1), ..., r(n-1)).
  Perm canonical_coset_rep(Perm g) const {
    DERANGE_REQUIRE(g.size() == n_, "canonical_coset_rep: degree mismatch");
    for (const auto& lv : levels_) {
      if (lv.transversal.size() <= 1) continue;
      u32 best_gamma = lv.beta;
      u32 best_val = g[lv.beta];
      for (const auto& [gamma, u] : lv.transversal) {
        (void)u;
        if (g[gamma] < best_val) {
          best_val = g[gamma];
          best_gamma = gamma;
        }
      }
      if (best_gamma != lv.beta) {
        g = perm_mul(lv.transversal.at(best_gamma), g);
      }
    }
    return g;
  }

 private:
  template <typename Fn>
  void enumerate_rec(const std::vector<const Level*>& active, size_t idx,
                     const Perm& acc, Fn&& fn) const {
    if (idx == 0) {
      fn(acc);
      return;
    }
    // Deepest active level first: g = u_k * ... * u_1.
    const Level* lv = active[idx - 1];
    for (const auto& [gamma, u] : lv->transversal) {
      (void)gamma;
      enumerate_rec(active, idx - 1, perm_mul(acc, u), fn);
    }
  }

  void rebuild_orbit(Level& lv) {
    lv.transversal.clear();
    lv.transversal.emplace(lv.beta, perm_identity(n_));
    std::queue<u32> bfs;
    bfs.push(lv.beta);
    while (!bfs.empty()) {
      const u32 gamma = bfs.front();
      bfs.pop();
      for (const Perm& s : lv.gens) {
        const u32 delta = s[gamma];
        if (!lv.transversal.count(delta)) {
          lv.transversal.emplace(delta,
                                 perm_mul(lv.transversal.at(gamma), s));
          bfs.push(delta);
        }
      }
    }
  }

  /// Establishes completeness at level l and below: every Schreier
  /// generator of level l sifts to the identity through the deeper chain.
  /// A non-identity residue found at level j is a new strong generator for
  /// every intermediate group, so it is appended to the generator lists of
  /// all levels l+1..j (keeping the level groups nested), and the affected
  /// levels are re-completed deepest first.
  void complete_level(size_t l) {
    Level& lv = levels_[l];
    rebuild_orbit(lv);
    for (const auto& [gamma, u] : lv.transversal) {
      for (const Perm& s : lv.gens) {
        const u32 delta = s[gamma];
        const Perm h =
            perm_mul(perm_mul(u, s), perm_inv(lv.transversal.at(delta)));
        if (perm_is_identity(h)) continue;
        auto [res, levidx] = strip(h, l + 1);
        if (!perm_is_identity(res)) {
          DERANGE_CHECK(levidx < levels_.size(),
                        "schreier-sims: non-identity residue escaped chain");
          for (size_t k = l + 1; k <= levidx; ++k) {
            levels_[k].gens.push_back(res);
          }
          for (size_t k = levidx; k > l; --k) {
            complete_level(k);
          }
        }
      }
    }
  }

  u32 n_;
  u64 order_ = 1;
  std::vector<Level> levels_;
  std::vector<u32> nontrivial_base_;
};

/// Group order from a fresh chain (the spec-level `bsgs_order` operation).
inline u64 bsgs_order(u32 degree, const std::vector<Perm>& gens) {
  return BSGS(degree, gens).order();
}

/// True iff the generators generate a group of exactly the target order.
inline bool generates(u32 degree, const std::vector<Perm>& gens,
                      u64 target_order) {
  return bsgs_order(degree, gens) == target_order;
}

// ---- conjugacy classes ------------------------------------------------------

/// Conjugation orbit x^G, stored as exact base-image keys with parent
/// pointers, so membership is O(1) and every member has a reconstructible
/// conjugator witness. Construction throws undecided_error if the orbit
/// exceeds the cap.
class ConjugacyClass {
 public:
  ConjugacyClass(const BSGS& G, std::vector<Perm> gens, Perm x,
                 u64 cap = 10'000'000)
      : G_(&G), gens_(std::move(gens)), x0_(std::move(x)) {
    DERANGE_REQUIRE(x0_.size() == G.degree(),
                    "conjugacy class: degree mismatch");
    for (const Perm& s : gens_) {
      DERANGE_REQUIRE(s.size() == G.degree(),
                      "conjugacy class: generator degree mismatch");
    }
    DERANGE_REQUIRE(G.contains(x0_),
                    "conjugacy class: representative outside the group");
    index_of_.emplace(G.base_image_key(x0_), 0);
    parent_.push_back({0, 0});
    std::queue<std::pair<Perm, u32>> bfs;
    bfs.push({x0_, 0});
    while (!bfs.empty()) {
      auto [y, idx] = std::move(bfs.front());
      bfs.pop();
      for (u32 gi = 0; gi < gens_.size(); ++gi) {
        Perm z = perm_conj(y, gens_[gi]);
        std::string key = G.base_image_key(z);
        if (index_of_.count(key)) continue;
        if (index_of_.size() >= cap) {
          throw undecided_error("conjugacy class: orbit cap " +
                                std::to_string(cap) + " exceeded");
        }
        const u32 zi = u32(index_of_.size());
        index_of_.emplace(std::move(key), zi);
        parent_.push_back({idx, gi});
        bfs.push({std::move(z), zi});
      }
    }
  }

  u64 size() const { return index_of_.size(); }
  const Perm& representative() const { return x0_; }

  bool contains(const Perm& y) const {
    return y.size() == G_->degree() &&
           index_of_.count(G_->base_image_key(y)) > 0;
  }

  std::optional<u32> index_of(const Perm& y) const {
    auto it = index_of_.find(G_->base_image_key(y));
    if (it == index_of_.end()) return std::nullopt;
    return it->second;
  }

  /// Conjugator witness: g with x0^g equal to the member at this index.
  Perm witness(u32 idx) const {
    DERANGE_REQUIRE(idx < parent_.size(), "conjugacy class: bad index");
    std::vector<u32> path;
    while (idx != 0) {
      path.push_back(parent_[idx].second);
      idx = parent_[idx].first;
    }
    Perm g = perm_identity(u32(x0_.size()));
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      g = perm_mul(g, gens_[*it]);
    }
    return g;
  }

  Perm member(u32 idx) const { return perm_conj(x0_, witness(idx)); }

 private:
  const BSGS* G_;
  std::vector<Perm> gens_;
  Perm x0_;
  std::unordered_map<std::string, u32> index_of_;
  std::vector<std::pair<u32, u32>> parent_;  // (parent index, generator index)
};

/// First element of H lying in the class, if any. H is given by its own
/// chain; its elements are enumerated exactly once each. Elements whose
/// order differs from the class representative's are skipped (order is a
/// class invariant).
inline std::optional<Perm> class_meets_subgroup(const ConjugacyClass& cls,
                                                const BSGS& H) {
  const u64 ord = perm_order(cls.representative());
  std::optional<Perm> hit;
  H.for_each_element([&](const Perm& h) {
    if (!hit && perm_order(h) == ord && cls.contains(h)) hit = h;
  });
  return hit;
}

/// |x^G ∩ H|: the number of elements of H lying in the class.
inline u64 class_subgroup_hits(const ConjugacyClass& cls, const BSGS& H) {
  const u64 ord = perm_order(cls.representative());
  u64 count = 0;
  H.for_each_element([&](const Perm& h) {
    if (perm_order(h) == ord && cls.contains(h)) ++count;
  });
  return count;
}

// ---- coset action -----------------------------------------------------------

struct CosetAction {
  std::vector<Perm> reps;   // canonical (lex-min) right coset representatives
  std::vector<Perm> perms;  // action of each input generator on coset indices
};

/// Action of G = <gens> on the right cosets of H by right multiplication.
/// Coset identity is decided through H's canonical lex-min representatives,
/// so the result is deterministic. Throws undecided_error past the cap.
inline CosetAction coset_action(const std::vector<Perm>& gens, const BSGS& H,
                                u64 cap = 100'000) {
  const u32 n = H.degree();
  for (const Perm& s : gens) {
    DERANGE_REQUIRE(s.size() == n, "coset_action: degree mismatch");
  }
  CosetAction out;
  std::map<Perm, u32> index_of;
  out.reps.push_back(H.canonical_coset_rep(perm_identity(n)));
  index_of.emplace(out.reps[0], 0);
  std::queue<u32> bfs;
  bfs.push(0);
  std::vector<std::vector<u32>> images(gens.size());
  while (!bfs.empty()) {
    const u32 idx = bfs.front();
    bfs.pop();
    for (u32 gi = 0; gi < gens.size(); ++gi) {
      Perm r = H.canonical_coset_rep(perm_mul(out.reps[idx], gens[gi]));
      auto it = index_of.find(r);
      u32 ri;
      if (it != index_of.end()) {
        ri = it->second;
      } else {
        if (index_of.size() >= cap) {
          throw undecided_error("coset_action: index cap " +
                                std::to_string(cap) + " exceeded");
        }
        ri = u32(index_of.size());
        index_of.emplace(r, ri);
        out.reps.push_back(std::move(r));
        bfs.push(ri);
      }
      if (images[gi].size() <= idx) images[gi].resize(idx + 1);
      images[gi][idx] = ri;
    }
  }
  const u32 m = u32(out.reps.size());
  for (u32 gi = 0; gi < gens.size(); ++gi) {
    images[gi].resize(m);
    out.perms.push_back(std::move(images[gi]));
    perm_validate(out.perms.back());
  }
  return out;
}

// ---- generic orbit actions --------------------------------------------------

template <typename Obj>
struct OrbitAction {
  std::vector<Obj> points;  // sorted by key: a canonical labelling
  std::vector<Perm> perms;  // action of each generator on point indices
};

/// Closure of the seeds under `apply(obj, gi)` for gi over num_gens
/// generators, with object identity decided by `key`. Points are sorted by
/// key after closure so the labelling is independent of seed and
/// generator discovery order. Throws undecided_error past the cap.
template <typename Obj, typename ApplyFn, typename KeyFn>
OrbitAction<Obj> generic_orbit_action(const std::vector<Obj>& seeds,
                                      u32 num_gens, ApplyFn&& apply,
                                      KeyFn&& key, u64 cap = 100'000) {
  DERANGE_REQUIRE(!seeds.empty(), "orbit action: no seeds");
  std::map<std::string, Obj> found;
  std::queue<const Obj*> bfs;
  for (const Obj& s : seeds) {
    auto [it, fresh] = found.emplace(key(s), s);
    if (fresh) bfs.push(&it->second);
  }
  while (!bfs.empty()) {
    const Obj* o = bfs.front();
    bfs.pop();
    for (u32 gi = 0; gi < num_gens; ++gi) {
      Obj img = apply(*o, gi);
      std::string k = key(img);
      if (found.count(k)) continue;
      if (found.size() >= cap) {
        throw undecided_error("orbit action: point cap " +
                              std::to_string(cap) + " exceeded");
      }
      auto [it, fresh] = found.emplace(std::move(k), std::move(img));
      DERANGE_CHECK(fresh, "orbit action: key race");
      bfs.push(&it->second);
    }
  }
  OrbitAction<Obj> out;
  std::unordered_map<std::string, u32> index_of;
  for (auto& [k, obj] : found) {  // std::map: iteration is key-sorted
    index_of.emplace(k, u32(out.points.size()));
    out.points.push_back(obj);
  }
  for (u32 gi = 0; gi < num_gens; ++gi) {
    Perm p(out.points.size());
    for (u32 i = 0; i < out.points.size(); ++i) {
      p[i] = index_of.at(key(apply(out.points[i], gi)));
    }
    perm_validate(p);
    out.perms.push_back(std::move(p));
  }
  return out;
}

// ---- action on subspaces ----------------------------------------------------

/// Canonical text label of a row space: dimensions plus the entries of the
/// reduced row echelon basis in field-element text form.
inline std::string subspace_key(const Mat& w) {
  std::string s = std::to_string(w.rows) + "x" + std::to_string(w.cols);
  for (u32 e : w.a) {
    s.push_back('|');
    s += format_elem(FieldElem{w.ctx, e});
  }
  return s;
}

/// Orbit closure of seed row spaces under right multiplication by the
/// generator matrices (row-vector convention: W -> rref(W g)). Points are
/// RREF bases sorted by their text labels.
inline OrbitAction<Mat> action_on_subspaces(const std::vector<Mat>& gens,
                                            const std::vector<Mat>& seeds,
                                            u64 cap = 100'000) {
  DERANGE_REQUIRE(!gens.empty(), "action_on_subspaces: no generators");
  const FieldCtx& F = mat_ctx(gens[0]);
  for (const Mat& g : gens) {
    DERANGE_REQUIRE(g.is_square() && g.rows == gens[0].rows &&
                        g.ctx == gens[0].ctx,
                    "action_on_subspaces: generators must be square, same "
                    "size, same field");
  }
  std::vector<Mat> norm_seeds;
  for (const Mat& s : seeds) {
    DERANGE_REQUIRE(s.ctx == gens[0].ctx && s.cols == gens[0].cols,
                    "action_on_subspaces: seed shape/field mismatch");
    Rref r = rref(s);
    DERANGE_REQUIRE(r.rank > 0, "action_on_subspaces: zero seed subspace");
    norm_seeds.push_back(std::move(r.m));
  }
  (void)F;
  return generic_orbit_action<Mat>(
      norm_seeds, u32(gens.size()),
      [&](const Mat& w, u32 gi) { return rref(w * gens[gi]).m; },
      [](const Mat& w) { return subspace_key(w); }, cap);
}

// ---- primitivity ------------------------------------------------------------

/// Size of the minimal block containing {a, b} for the group generated by
/// gens (Atkinson's union-find closure).
inline u32 minimal_block_size(const std::vector<Perm>& gens, u32 n, u32 a,
                              u32 b) {
  std::vector<u32> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](u32 x) {
    while (uf[x] != x) {
      uf[x] = uf[uf[x]];
      x = uf[x];
    }
    return x;
  };
  std::queue<std::pair<u32, u32>> work;
  uf[find(b)] = find(a);
  work.push({a, b});
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop();
    for (const Perm& s : gens) {
      const u32 sx = find(s[x]);
      const u32 sy = find(s[y]);
      if (sx != sy) {
        uf[sy] = sx;
        work.push({s[x], s[y]});
      }
    }
  }
  u32 size = 0;
  const u32 ra = find(a);
  for (u32 i = 0; i < n; ++i) {
    if (find(i) == ra) ++size;
  }
  return size;
}

inline bool is_transitive(const std::vector<Perm>& gens, u32 n) {
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::queue<u32> bfs;
  bfs.push(0);
  u32 count = 1;
  while (!bfs.empty()) {
    const u32 x = bfs.front();
    bfs.pop();
    for (const Perm& s : gens) {
      if (!seen[s[x]]) {
        seen[s[x]] = true;
        ++count;
        bfs.push(s[x]);
      }
    }
  }
  return count == n;
}

/// Primitive: transitive with no nontrivial block system. Intransitive
/// groups (on degree >= 2) are reported imprimitive.
inline bool is_primitive(const std::vector<Perm>& gens, u32 n) {
  for (const Perm& s : gens) {
    DERANGE_REQUIRE(s.size() == n, "is_primitive: degree mismatch");
  }
  if (n <= 1) return true;
  if (!is_transitive(gens, n)) return false;
  for (u32 b = 1; b < n; ++b) {
    const u32 size = minimal_block_size(gens, n, 0, b);
    if (size < n) return false;  // proper block of size >= 2 found
  }
  return true;
}

}  // namespace derange

#endif  // DERANGE_PERMREP_HPP
