// Copyright 2026 The wscolor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wscolor/forest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace wsc {

u64 freq_floor(u64 delta_pow2, long double epsilon) {
  WSC_CHECK_MSG(is_pow2(delta_pow2), "delta must be a power of two here");
  WSC_CHECK_MSG(epsilon > 0.0L && epsilon <= 1.0L, "epsilon out of (0, 1]");
  // delta^epsilon = 2^(k * epsilon); round the exponent up, with slack so an
  // exact power of two is not pushed to the next one by float noise.
  long double exact = static_cast<long double>(floor_log2(delta_pow2)) * epsilon;
  u64 exponent = u64(std::ceil(exact - 1e-9L));
  return std::max<u64>(2, pow2(u32(exponent)));
}

std::vector<FreqVector> enumerate_freq_vectors(u64 delta_pow2, long double epsilon,
                                               u32 r, u64 batch_bound) {
  const u64 fh = freq_floor(delta_pow2, epsilon);
  const u64 f0 = pow2(r + 1);
  std::vector<FreqVector> out;
  if (f0 < fh || f0 > batch_bound) return out;

  // Depth-first over non-increasing power-of-two prefixes. `tree_span` is
  // 2^{r+1} times the prefix product, i.e. the span constraint if the vector
  // were closed right after the prefix; it must never exceed batch_bound.
  FreqVector cur;
  auto rec = [&](auto&& self, u64 tree_span) -> void {
    cur.push_back(fh);
    out.push_back(cur);
    cur.pop_back();
    u64 last = cur.empty() ? f0 : cur.back();
    for (u64 g = fh; g <= last; g *= 2) {
      if (tree_span > batch_bound / g) continue;  // overflow-safe g*span > bound
      cur.push_back(g);
      self(self, tree_span * g);
      cur.pop_back();
    }
  };
  rec(rec, f0);
  std::sort(out.begin(), out.end());
  return out;
}

ForestShape make_shape(u32 r, FreqVector f) {
  WSC_CHECK_MSG(!f.empty(), "frequency vector must have at least one entry");
  ForestShape s;
  s.f0 = pow2(r + 1);
  s.f = std::move(f);
  s.spans.resize(s.f.size() + 1);
  s.spans[0] = 1;
  s.spans[1] = s.f0;
  for (u32 k = 2; k <= s.height(); ++k) s.spans[k] = s.spans[k - 1] * s.f[k - 2];
  return s;
}

void MarkStore::update(u64 v, u64 t) {
  auto it = per_vertex_.find(v);
  if (it == per_vertex_.end()) return;
  VertexState& st = it->second;
  if (st.last_t == t) return;
  const u64 old = st.last_t;
  st.last_t = t;
  const u32 h = shape_->height();

  if (shape_->node_at(h, old) != shape_->node_at(h, t)) {
    // New tree: everything from the old one is dropped.
    total_marks_ -= st.marks.size();
    st.marks.clear();
    std::fill(st.path_deg.begin(), st.path_deg.end(), 0);
    return;
  }

  // Divergence level: the lowest level where old and new paths agree.
  u32 j = 1;
  while (shape_->node_at(j, old) != shape_->node_at(j, t)) ++j;

  // Marks with level <= j-2 had their parent fall off the path; all of them
  // live inside the just-closed level-(j-1) node of the old path, so they
  // collapse into one mark there whose degree is the accumulator snapshot.
  if (j >= 2) {
    auto cut = std::partition_point(
        st.marks.begin(), st.marks.end(),
        [&](const Mark& m) { return m.level + 2 <= j; });
    if (cut != st.marks.begin()) {
      Mark lifted;
      lifted.level = j - 1;
      lifted.ordinal = shape_->node_at(j - 1, old);
      lifted.deg = st.path_deg[j - 1];
      const Mark& donor = st.marks.front();
      if (!donor.suffix.empty()) {
        // Keep c_j..c_h: drop the entries the donor knew below level j.
        std::size_t drop = (j - 1) - donor.level;
        lifted.suffix.assign(donor.suffix.begin() + i64(drop), donor.suffix.end());
      }
      total_marks_ -= u64(cut - st.marks.begin()) - 1;
      st.marks.erase(st.marks.begin(), cut);
      auto pos = std::lower_bound(st.marks.begin(), st.marks.end(), lifted,
                                  [](const Mark& a, const Mark& b) {
                                    return std::pair(a.level, a.ordinal) <
                                           std::pair(b.level, b.ordinal);
                                  });
      st.marks.insert(pos, std::move(lifted));
    }
  }
  for (u32 k = 0; k < j; ++k) st.path_deg[k] = 0;
}

void MarkStore::record(u64 v, u64 t, u64 deg, bool mark, std::vector<u64> suffix) {
  auto [it, inserted] = per_vertex_.try_emplace(v);
  VertexState& st = it->second;
  if (inserted) {
    st.path_deg.assign(shape_->height() + 1, 0);
    st.last_t = t;
  } else {
    update(v, t);
  }
  for (u64& acc : st.path_deg) acc += deg;
  if (mark) {
    WSC_CHECK_MSG(suffix.empty() || suffix.size() == shape_->height(),
                  "leaf suffix must carry one coordinate per level");
    Mark leaf{0, t, deg, std::move(suffix)};
    auto pos = std::lower_bound(st.marks.begin(), st.marks.end(), leaf,
                                [](const Mark& a, const Mark& b) {
                                  return std::pair(a.level, a.ordinal) <
                                         std::pair(b.level, b.ordinal);
                                });
    WSC_CHECK_MSG(pos == st.marks.end() || pos->level != 0 || pos->ordinal != t,
                  "leaf already marked for this batch");
    st.marks.insert(pos, std::move(leaf));
    ++total_marks_;
  }
}

std::vector<u64> MarkStore::tracked_vertices() const {
  std::vector<u64> out;
  out.reserve(per_vertex_.size());
  for (const auto& [v, st] : per_vertex_) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<Mark>& MarkStore::marks_of(u64 v) const {
  static const std::vector<Mark> kEmpty;
  auto it = per_vertex_.find(v);
  return it == per_vertex_.end() ? kEmpty : it->second.marks;
}

u64 MarkStore::count_at_level(u64 v, u32 level) const {
  u64 count = 0;
  for (const Mark& m : marks_of(v)) count += (m.level == level);
  return count;
}

void MarkStore::inject_mark(u64 v, u64 t, Mark m) {
  auto [it, inserted] = per_vertex_.try_emplace(v);
  VertexState& st = it->second;
  if (inserted) st.path_deg.assign(shape_->height() + 1, 0);
  st.last_t = t;
  auto pos = std::lower_bound(st.marks.begin(), st.marks.end(), m,
                              [](const Mark& a, const Mark& b) {
                                return std::pair(a.level, a.ordinal) <
                                       std::pair(b.level, b.ordinal);
                              });
  st.marks.insert(pos, std::move(m));
  ++total_marks_;
}

std::optional<MarkViolation> MarkStore::validate(u64 t, u32 r, u64 n) {
  std::vector<u64> vertices;
  vertices.reserve(per_vertex_.size());
  for (const auto& [v, st] : per_vertex_) vertices.push_back(v);
  std::sort(vertices.begin(), vertices.end());
  for (u64 v : vertices) update(v, t);

  const u32 h = shape_->height();
  for (u64 v : vertices) {
    const auto& marks = per_vertex_.at(v).marks;
    for (std::size_t i = 0; i < marks.size(); ++i) {
      const Mark& m = marks[i];
      const bool dup = i > 0 && marks[i - 1].level == m.level &&
                       marks[i - 1].ordinal == m.ordinal;
      // The batch that just closed is the one legal on-path mark: it elevates
      // or becomes an off-path child on the next update.
      const bool current_leaf = m.level == 0 && m.ordinal == t;
      const bool child_of_path =
          current_leaf ||
          (m.level < h &&
           m.ordinal / shape_->fanout(m.level + 1) == shape_->node_at(m.level + 1, t) &&
           m.ordinal != shape_->node_at(m.level, t));
      if (dup || !child_of_path)
        return MarkViolation{v, m.level, m.ordinal, 1,
                             dup ? "duplicate marked node"
                                 : "marked node is not a child of the current path"};
      // Degree rule: deg over the subtree is at least 2^{r-k} * f_1...f_k.
      u128 bound = u128(1) << r;
      for (u32 i2 = 1; i2 <= m.level; ++i2) bound *= shape_->f[i2 - 1];
      bound >>= m.level;
      if (u128(m.deg) < bound)
        return MarkViolation{v, m.level, m.ordinal, 2,
                             "subtree degree below the class lower bound"};
    }
  }
  if (total_marks_ > (u128(1) << (h + 3)) * n)
    return MarkViolation{0, 0, 0, 3, "mark count exceeds 2^{h+3} * n"};
  return std::nullopt;
}

void MarkStore::dump(std::ostream& os, const std::string& vector_label) const {
  std::vector<u64> vertices;
  for (const auto& [v, st] : per_vertex_)
    if (!st.marks.empty()) vertices.push_back(v);
  std::sort(vertices.begin(), vertices.end());
  for (u64 v : vertices) {
    for (const Mark& m : per_vertex_.at(v).marks) {
      os << v << ' ' << vector_label << ' ' << m.level << ' ' << m.ordinal;
      for (u64 c : m.suffix) os << ' ' << c;
      os << '\n';
    }
  }
}

ClassForests::ClassForests(u64 delta_pow2, long double epsilon, u32 r,
                           u64 batch_bound)
    : fh_(freq_floor(delta_pow2, epsilon)), r_(r) {
  for (FreqVector& f : enumerate_freq_vectors(delta_pow2, epsilon, r, batch_bound))
    shapes_.push_back(make_shape(r, std::move(f)));
  stores_.reserve(shapes_.size());
  for (const ForestShape& s : shapes_) stores_.emplace_back(&s);
}

void ClassForests::prepare(u64 v, u64 t) {
  for (MarkStore& store : stores_) store.update(v, t);
}

std::optional<u32> ClassForests::select(u64 v, u64 t) const {
  std::vector<u32> alive(shapes_.size());
  for (u32 i = 0; i < alive.size(); ++i) alive[i] = i;

  for (u32 pos = 0; !alive.empty(); ++pos) {
    // Candidate values for coordinate pos+1, ascending; shapes_ is sorted
    // lexicographically, so equal prefixes sit on ascending next entries.
    u64 chosen_value = 0;
    std::vector<u32> witnesses;
    for (u32 idx : alive) {
      const u64 g = shapes_[idx].f[pos];
      if (!witnesses.empty() && g != chosen_value) break;
      if (stores_[idx].count_at_level(v, pos) < g) {
        chosen_value = g;
        witnesses.push_back(idx);
      }
    }
    // witnesses holds every witness of the smallest feasible value because
    // equal-prefix shapes are contiguous and grouped by f[pos].
    if (witnesses.empty()) return std::nullopt;
    if (chosen_value == fh_) return witnesses.front();
    std::vector<u32> next;
    for (u32 idx : alive)
      if (shapes_[idx].f[pos] == chosen_value) next.push_back(idx);
    alive = std::move(next);
  }
  return std::nullopt;
}

void ClassForests::record(u64 v, u64 t, u64 deg, std::optional<u32> chosen,
                          std::vector<u64> suffix) {
  for (u32 i = 0; i < stores_.size(); ++i) {
    const bool mark = chosen && *chosen == i;
    stores_[i].record(v, t, deg, mark, mark ? std::move(suffix) : std::vector<u64>{});
  }
}

std::optional<MarkViolation> ClassForests::validate(u64 t, u64 n) {
  for (MarkStore& store : stores_)
    if (auto bad = store.validate(t, r_, n)) return bad;
  return std::nullopt;
}

void ClassForests::dump(std::ostream& os) const {
  for (u32 i = 0; i < stores_.size(); ++i) {
    std::ostringstream label;
    for (std::size_t k = 0; k < shapes_[i].f.size(); ++k) {
      if (k) label << ',';
      label << shapes_[i].f[k];
    }
    stores_[i].dump(os, label.str());
  }
}

}  // namespace wsc
