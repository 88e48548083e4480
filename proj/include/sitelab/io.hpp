#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "sitelab/coverage.hpp"
#include "sitelab/fincat.hpp"
#include "sitelab/prolocal.hpp"
#include "sitelab/sheafkit.hpp"

namespace sitelab::io {

using Json = nlohmann::ordered_json;
using Pointer = Json::json_pointer;

/// Parse or validation failure inside a document; what() reads
/// "file:line:col: message".
class DocumentError : public InputError {
 public:
  DocumentError(std::string file, int line, int column, const std::string& message);
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_;
  int column_;
};

struct Document {
  std::string file;
  std::string text;
  Json json;
};

Document load_document(const std::string& path);
Document parse_document(const std::string& text, const std::string& name = "<inline>");

/// 1-based line and column of the value at `at` (or of the closest
/// enclosing value that exists).
std::pair<int, int> locate(const std::string& text, const Pointer& at);
[[noreturn]] void fail(const Document& d, const Pointer& at, const std::string& message);

/// Typed access; each fails with the document location on a missing value
/// or a wrong type.
const Json& at_ptr(const Document& d, const Pointer& p);
std::string str_at(const Document& d, const Pointer& p);
const Json& array_at(const Document& d, const Pointer& p);
const Json& object_at(const Document& d, const Pointer& p);
long long int_at(const Document& d, const Pointer& p);
std::vector<std::string> string_list(const Document& d, const Pointer& p);
ObjId object_named(const Document& d, const Pointer& p, const FiniteCategory& c);
MorId morphism_named(const Document& d, const Pointer& p, const FiniteCategory& c);

/// {"objects", "morphisms":[{"name","src","tgt"}], "identities":{obj:name},
/// "composition":[[g,f,gf]]} with identity compositions completed, or
/// {"poset":{"elements","leq"}}. Validated.
CategoryPtr read_category(const Document& d, const Pointer& at = Pointer());
/// {"points", "specializations":[[x,y]]}.
FiniteSpace read_space(const Document& d, const Pointer& at = Pointer());
/// {"families":[{"target", "members":[morphism names]}]}.
Pretopology read_pretopology(const Document& d, const Pointer& at, const FiniteCategory& c);

/// A sheaf document is either set-valued (element lists) or abelian
/// ({"cyclic_orders":[...]} per object, integer matrices as restrictions).
struct SheafDocument {
  PresheafPtr set;
  AbPresheafPtr ab;  // null for set-valued documents
};

/// {"values":{obj:[labels] | {"cyclic_orders":[...]}}, "restrictions":{morphism:
/// table | matrix}}. Restrictions along identities may be omitted, as may
/// those along composites of listed morphisms. Validated.
SheafDocument read_sheaf(const Document& d, const Pointer& at, const CategoryPtr& c);

struct MorphismDocument {
  SheafMorphism set;
  std::optional<AbMorphism> ab;
};

/// {"components":{obj: table | matrix}} between two sheaf documents. Validated.
MorphismDocument read_morphism(const Document& d, const Pointer& at, const SheafDocument& source,
                               const SheafDocument& target);

/// {"index_poset":{"elements","leq"}, "diagram":{λ: object},
/// "transitions":{"(λ,μ)": morphism}}. Transitions with a unique candidate
/// morphism may be omitted. Validated.
ProObject read_pro_object(const Document& d, const Pointer& at, const CategoryPtr& c);

Json to_json(const FiniteCategory& c);
Json to_json(const FiniteSpace& s);
Json to_json(const Pretopology& p, const FiniteCategory& c);
Json to_json(const SetPresheaf& f);
Json to_json(const AbPresheaf& f);
Json to_json(const ProObject& p);

}  // namespace sitelab::io
