#include "tlink/relation.h"

#include <algorithm>
#include <cctype>

#include "tlink/error.h"

namespace tlink {

namespace {

constexpr std::array<std::string_view, kNumRelations> kNames = {
    "simultaneous", "before",   "after",       "ibefore",  "iafter",
    "begins",       "begun_by", "ends",        "ended_by", "includes",
    "is_included",  "during",   "during_inv",  "identity",
};

}  // namespace

const std::array<Relation, kNumRelations> &AllRelations() {
  static const std::array<Relation, kNumRelations> all = [] {
    std::array<Relation, kNumRelations> a{};
    for (int i = 0; i < kNumRelations; ++i) a[i] = static_cast<Relation>(i);
    return a;
  }();
  return all;
}

std::string_view RelationName(Relation r) { return kNames[RelationId(r)]; }

Relation ParseRelation(std::string_view label) {
  std::string lower(label);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (int i = 0; i < kNumRelations; ++i) {
    if (kNames[i] == lower) return static_cast<Relation>(i);
  }
  throw SchemaError("unknown temporal relation '" + std::string(label) + "'");
}

Relation RelationFromId(int id) {
  if (id < 0 || id >= kNumRelations) {
    throw SchemaError("relation id out of range: " + std::to_string(id));
  }
  return static_cast<Relation>(id);
}

Relation InvertRelation(Relation r) {
  switch (r) {
    case Relation::kBefore: return Relation::kAfter;
    case Relation::kAfter: return Relation::kBefore;
    case Relation::kIBefore: return Relation::kIAfter;
    case Relation::kIAfter: return Relation::kIBefore;
    case Relation::kBegins: return Relation::kBegunBy;
    case Relation::kBegunBy: return Relation::kBegins;
    case Relation::kEnds: return Relation::kEndedBy;
    case Relation::kEndedBy: return Relation::kEnds;
    case Relation::kIncludes: return Relation::kIsIncluded;
    case Relation::kIsIncluded: return Relation::kIncludes;
    case Relation::kDuring: return Relation::kDuringInv;
    case Relation::kDuringInv: return Relation::kDuring;
    case Relation::kSimultaneous:
    case Relation::kIdentity:
      return r;
  }
  return r;
}

}  // namespace tlink
