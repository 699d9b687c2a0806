#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lakit/witness.hpp"

namespace lakit {

struct CheckEntry {
    std::string axiom;
    bool pass = false;
    std::optional<Witness> witness; // populated on failure
};

// Result of running a block of exact identity checks: one entry per axiom,
// each carrying a concrete counterexample when it fails.
struct CheckReport {
    std::vector<CheckEntry> entries;

    bool verdict() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }

    void add_pass(std::string axiom) { entries.push_back({std::move(axiom), true, std::nullopt}); }
    void add_fail(std::string axiom, Witness w) {
        entries.push_back({std::move(axiom), false, std::move(w)});
    }
    // Pass iff the discrepancy section vanishes; otherwise record the first
    // nonzero component with the frame tuple that produced it.
    void add_section_check(const std::string& axiom, const Section& discrepancy,
                           std::vector<std::size_t> frames);
    void merge(const CheckReport& o) {
        entries.insert(entries.end(), o.entries.begin(), o.entries.end());
    }
    const CheckEntry* find(const std::string& axiom) const {
        for (const auto& e : entries)
            if (e.axiom == axiom) return &e;
        return nullptr;
    }
};

} // namespace lakit
