#pragma once

#include "torusbook/mcg.hpp"
#include "torusbook/openbook.hpp"
#include "torusbook/plumbing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torusbook {

struct PipelineOptions {
    std::vector<std::string> relation_files;
    std::vector<std::string> hint_files;
    std::vector<std::string> disabled_relations;
    CertifyBudget budget;

    RelationTable make_table() const;
    HintRegistry make_hints() const;
};

// Full run: matrix -> normal form -> plumbing -> open book -> certificate,
// with both homology oracles computed and compared.
struct PipelineReport {
    Sl2Matrix matrix;
    NormalForm word;
    PlumbingGraph graph;
    AbelianGroup h1_bundle;
    AbelianGroup h1_plumbing;
    bool oracles_agree = false;
    OpenBook book;
    OpenBookStats book_stats;
    Certificate certificate;
};

PipelineReport run_pipeline(const Sl2Matrix& m, const PipelineOptions& opt = {});
std::string report_to_json(const PipelineReport& r);
std::string report_to_text(const PipelineReport& r);

// Maps an elliptic open book onto the marked genus-1 surface: boundary
// circles become delta_1..delta_n in label order, interior joined curves
// become alpha_1..alpha_k.  Fails (with a reason) when the page is not
// genus 1 or the interior curves outnumber the alpha system.
std::optional<TwistWord> to_marked_word(const OpenBook& ob, std::string* why = nullptr);

struct FixtureResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Pinned reference facts: the seven Seifert monodromies, the Y_k family,
// the chain-relation table, and the certifier's worked cases.
std::vector<FixtureResult> run_fixtures(const PipelineOptions& opt = {});

}  // namespace torusbook
