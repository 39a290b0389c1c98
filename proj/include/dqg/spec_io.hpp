#pragma once

#include <optional>
#include <string>

#include "dqg/assembly.hpp"

namespace dqg {

// Schema or structure violation in a document; the message names the
// offending field path or line.
class SpecError : public StructuralError {
public:
    using StructuralError::StructuralError;
};

struct SpecDocument {
    DqgSpec spec;
    std::optional<Coaction> coaction;
    std::optional<CycleRep> cycle;
    std::string cycle_kind;

    // Requires both the coaction and the cycle sections.
    Cycle make_cycle() const;
};

SpecDocument parse_spec(const std::string& text);
std::string emit_spec(const SpecDocument& doc);

SpecDocument load_spec(const std::string& path);
void save_spec(const std::string& path, const SpecDocument& doc);

// Element files list blocks by label of the given layout.
Element parse_element(const std::string& text, const BlockLayout& layout);
std::string emit_element(const Element& a, const BlockLayout& layout);

std::string read_file(const std::string& path);

}  // namespace dqg
