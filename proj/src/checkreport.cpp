#include "lakit/checkreport.hpp"

namespace lakit {

void CheckReport::add_section_check(const std::string& axiom, const Section& discrepancy,
                                    std::vector<std::size_t> frames) {
    CheckEntry* entry = nullptr;
    for (auto& e : entries)
        if (e.axiom == axiom) entry = &e;
    if (!entry) {
        entries.push_back({axiom, true, std::nullopt});
        entry = &entries.back();
    }
    if (!entry->pass) return; // keep the first counterexample
    for (std::size_t i = 0; i < discrepancy.size(); ++i) {
        if (discrepancy[i].is_zero()) continue;
        std::vector<std::size_t> fr = frames;
        fr.push_back(i);
        entry->pass = false;
        entry->witness = make_witness(discrepancy[i], std::move(fr));
        return;
    }
}

} // namespace lakit
