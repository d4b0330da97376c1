#pragma once

#include <string>

namespace gpf {

enum class Verdict { Yes, No, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "unknown";
  }
}

// Verdict plus a provenance note naming the result that fired or the
// hypothesis gap. Unknown always carries a note.
struct TriState {
  Verdict verdict = Verdict::Unknown;
  std::string why = "not evaluated";

  static TriState yes(std::string why = "") { return {Verdict::Yes, std::move(why)}; }
  static TriState no(std::string why = "") { return {Verdict::No, std::move(why)}; }
  static TriState unknown(std::string why) {
    if (why.empty()) why = "undetermined";
    return {Verdict::Unknown, std::move(why)};
  }

  bool is_yes() const { return verdict == Verdict::Yes; }
  bool is_no() const { return verdict == Verdict::No; }
  bool is_unknown() const { return verdict == Verdict::Unknown; }
  bool decisive() const { return verdict != Verdict::Unknown; }
};

// Conjunction with No-dominance: any definite No falsifies the whole
// statement even when other conjuncts are Unknown.
inline TriState tri_all(const std::initializer_list<TriState>& parts) {
  for (const TriState& p : parts)
    if (p.is_no()) return p;
  for (const TriState& p : parts)
    if (p.is_unknown()) return p;
  return TriState::yes("all conditions hold");
}

inline TriState tri_not(const TriState& t) {
  if (t.is_yes()) return TriState::no(t.why);
  if (t.is_no()) return TriState::yes(t.why);
  return t;
}

}  // namespace gpf
