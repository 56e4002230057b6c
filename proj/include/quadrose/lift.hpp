#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quadrose/quad.hpp"

namespace quadrose {

/// One letter of a free-group word: a 1-based generator index and a sign.
/// Rose loop generators print as x1, x2^-1, ...; classes in the complement
/// of the marked points use the dual symbols y1, y2^-1, ...
struct Letter {
  int index = 0;
  int sign = +1;
  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

inline Letter inv(Letter l) { return {l.index, -l.sign}; }

/// Free reduction: strips adjacent inverse pairs until none remain.
Word reduce(Word w);
Word inverse(const Word& w);

/// "x1 x2^-1 x1"; the empty word prints as "1".
std::string word_str(const Word& w, char symbol = 'x');

/// Inverse of word_str. Every letter must use the same symbol; "1" or an
/// all-whitespace string is the empty word.
std::optional<Word> parse_word(std::string_view text, Report* err = nullptr);

/// A word walked through the covering labels: letter (j,+1) leaves along
/// the unique outgoing petal-j edge, (j,-1) backs up the incoming one.
struct LiftResult {
  std::vector<VertexId> vertices;             // |w| + 1 entries
  std::vector<std::pair<EdgeId, int>> edges;  // edge id and traversal sign
  VertexId terminal = kNone;
  bool closed = false;
};

/// Deterministic lift of w starting at v. Generator-backed graphs are
/// expanded just far enough that the walk stays inside complete vertices.
std::optional<LiftResult> lift_word(const Quadruple& q, VertexId v,
                                    const Word& w, Report* err = nullptr);

/// Does w lift to a loop at v, i.e. lie in the covering subgroup?
bool member(const Quadruple& q, VertexId v, const Word& w,
            Report* err = nullptr);

/// Free basis of the covering subgroup at v: breadth-first spanning tree,
/// one word per non-tree edge (path out, the edge, path back). Finite
/// graphs only; basis size is |E| - |V| + 1.
std::optional<std::vector<Word>> subgroup_basis(const Quadruple& q, VertexId v,
                                                Report* err = nullptr);

/// Homotopy class rel marked points of the closed lift of w at v: signed
/// crossings of the lifted polyline with the vertical rays going down from
/// each marked point, in path order, freely reduced. Crossing ray i in the
/// +x direction contributes y_{i+1}. Near-degenerate ray positions are
/// nudged by 1e-9 of the bounding-box width before counting.
std::optional<Word> lift_class(const Quadruple& q, VertexId v, const Word& w,
                               Report* err = nullptr);

/// Crossing word of rose petal j itself, as a loop at the center.
Word rose_class(const Quadruple& q, int j, Report* err = nullptr);

/// Every petal's crossing word must be exactly the dual letter of its own
/// marked point; this pins the y-indexing that lift_class relies on.
Report check_rose_alignment(const Quadruple& q);

/// Isotopy of the encoded maps rel marked points: the covering subgroups
/// at b1/b2 agree, and on a basis the lift classes agree up to conjugation
/// by the connecting word p (a dual-generator word). nullopt with `why`
/// filled when the inputs do not qualify; false carries a witness.
std::optional<bool> isotopic(const Quadruple& q1, const Quadruple& q2,
                             VertexId b1, VertexId b2, const Word& p = {},
                             Report* why = nullptr);

/// Membership comparison over every reduced word of length <= radius,
/// basepoints taken from the quadruples themselves.
struct BallCompare {
  int radius = 0;
  std::vector<char> agree;  // per sequence entry: all verdicts match limit
  std::optional<std::size_t> threshold;  // least n agreeing from n onwards
  Word witness;             // a word the last disagreeing entry got wrong
  std::size_t witness_at = 0;
};

BallCompare group_ball_compare(const std::vector<const Quadruple*>& seq,
                               const Quadruple& limit, int radius = 8);

}  // namespace quadrose
