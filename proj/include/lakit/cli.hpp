#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lakit/constructions.hpp"
#include "lakit/dirac.hpp"
#include "lakit/graded.hpp"

namespace lakit {

struct SourcePos {
    std::size_t line = 0; // 1-based; 0 = whole document
    std::size_t col = 0;
};

// Parse or semantic error in a spec document, with source location.
struct SpecError : std::runtime_error {
    SourcePos pos;
    SpecError(SourcePos p, const std::string& msg)
        : std::runtime_error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg),
          pos(p) {}
};

// A named coefficient table declared in a document.  Inputs are bundle names
// or "base" (the coordinate slots); the output is a bundle name, "base", or
// "scalar".
struct TensorDecl {
    std::vector<std::string> in;
    std::string out;
    Symmetry sym = Symmetry::none;
    TensorMap data;
    SourcePos pos;
};

struct SubBundleDecl {
    std::string bundle;
    SubBundle sub;
    SourcePos pos;
};

// A structure declaration: a kind tag and name -> value bindings referring
// to bundles, tensors, subbundles or other structures.
struct StructDecl {
    std::string kind;
    std::string name;
    std::map<std::string, std::string> fields;
    SourcePos pos;
};

struct SpecDocument {
    std::size_t nvars = 0;
    std::map<std::string, std::size_t> bundles;
    std::map<std::string, TensorDecl> tensors;
    std::map<std::string, SubBundleDecl> subbundles;
    std::vector<StructDecl> structures;

    const StructDecl* find_structure(const std::string& kind) const;
    const StructDecl& structure_named(const std::string& name, SourcePos at) const;
};

SpecDocument parse_spec(const std::string& text);
std::string serialize_spec(const SpecDocument& doc);

// Builders from a structure declaration to kernel data (throw SpecError).
CourantData build_courant(const SpecDocument& doc, const StructDecl& s);
SplitLie2 build_split_lie2(const SpecDocument& doc, const StructDecl& s);
SelfDual2Rep build_selfdual_2rep(const SpecDocument& doc, const StructDecl& s);
LACourantSplit build_la_courant(const SpecDocument& doc, const StructDecl& s);
DullBracket build_lie_algebroid(const SpecDocument& doc, const StructDecl& s);
Matched2Reps build_matched(const SpecDocument& doc, const StructDecl& s);
DoubleSubbundleData build_double_sub(const SpecDocument& doc, const StructDecl& s);
Connection build_base_connection(const SpecDocument& doc, const std::string& tensor_name,
                                 std::size_t space_rank, SourcePos at);

struct ReportDocument {
    std::string instance;
    std::string suite;
    CheckReport report;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

// Run one suite (or "all") over every applicable structure in the document.
std::vector<ReportDocument> run_suites(const SpecDocument& doc, const std::string& instance_id,
                                       const std::string& suite, std::size_t truncation,
                                       std::uint64_t seed);

// Construct subcommands: build a derived structure and serialize it as a new
// document.  `kind` is one of core-courant, manin, tangent, standard,
// from-matched.
std::string run_construct(const SpecDocument& doc, const std::string& kind);

std::string reports_json(const std::vector<ReportDocument>& reports);
std::string reports_text(const std::vector<ReportDocument>& reports);

// Full command-line driver; returns the process exit code
// (0 = all checks pass, 1 = some check failed, 2 = usage or input error).
int run_cli(int argc, const char* const* argv);

} // namespace lakit
