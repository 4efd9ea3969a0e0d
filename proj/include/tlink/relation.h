#ifndef TLINK_RELATION_H_
#define TLINK_RELATION_H_

#include <array>
#include <string>
#include <string_view>

namespace tlink {

// The 14 TimeML temporal relations. The enumerator order is the published
// class-id order used for one-hot targets, confusion matrices and argmax
// tie-breaking.
enum class Relation : int {
  kSimultaneous = 0,
  kBefore,
  kAfter,
  kIBefore,
  kIAfter,
  kBegins,
  kBegunBy,
  kEnds,
  kEndedBy,
  kIncludes,
  kIsIncluded,
  kDuring,
  kDuringInv,
  kIdentity,
};

inline constexpr int kNumRelations = 14;

// All relations in class-id order.
const std::array<Relation, kNumRelations> &AllRelations();

// Lowercase label, e.g. "is_included".
std::string_view RelationName(Relation r);

// Case-insensitive lookup. Throws SchemaError for anything outside the
// 14-label set.
Relation ParseRelation(std::string_view label);

inline int RelationId(Relation r) { return static_cast<int>(r); }
Relation RelationFromId(int id);

// Relation that holds when the two arguments are swapped. Six pairs are
// mutual inverses; simultaneous and identity are symmetric.
Relation InvertRelation(Relation r);

}  // namespace tlink

#endif  // TLINK_RELATION_H_
