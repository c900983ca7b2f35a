#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bell_lab/errors.hpp"

namespace bell {

using Index = std::size_t;

/// An n-party measurement scenario: how many inputs and how many outcomes each
/// party has. `outputs[p]` counts every outcome value of party p; when
/// `bottom[p]` is set, the *last* outcome value of that party is the no-outcome
/// symbol, so post-selection is an explicit table transformation instead of a
/// hidden convention.
struct Scenario {
    int n_parties = 0;
    std::vector<int> inputs;   // per party, >= 1
    std::vector<int> outputs;  // per party, >= 1 (includes the no-outcome slot when flagged)
    std::vector<bool> bottom;  // per party: last outcome value is "no outcome"

    Scenario() = default;

    Scenario(int parties, std::vector<int> inputs_per_party, std::vector<int> outputs_per_party,
             std::vector<bool> bottom_flags = {})
        : n_parties(parties),
          inputs(std::move(inputs_per_party)),
          outputs(std::move(outputs_per_party)),
          bottom(std::move(bottom_flags)) {
        if (bottom.empty()) bottom.assign(static_cast<std::size_t>(parties), false);
        if (parties < 1) throw ValidationError("scenario: need at least one party");
        if (inputs.size() != static_cast<std::size_t>(parties) ||
            outputs.size() != static_cast<std::size_t>(parties) ||
            bottom.size() != static_cast<std::size_t>(parties))
            throw ValidationError("scenario: per-party lists must have length n_parties");
        for (int p = 0; p < parties; ++p) {
            if (inputs[p] < 1 || outputs[p] < 1)
                throw ValidationError("scenario: party " + std::to_string(p) +
                                      " needs at least one input and one output");
        }
    }

    static Scenario uniform(int parties, int inputs_each, int outputs_each) {
        return Scenario(parties, std::vector<int>(parties, inputs_each),
                        std::vector<int>(parties, outputs_each));
    }

    /// The minimal two-party scenario with binary inputs and outcomes.
    static Scenario chsh() { return uniform(2, 2, 2); }

    Index n_joint_inputs() const {
        Index n = 1;
        for (int k : inputs) n *= static_cast<Index>(k);
        return n;
    }

    Index n_joint_outputs() const {
        Index n = 1;
        for (int k : outputs) n *= static_cast<Index>(k);
        return n;
    }

    Index n_cells() const { return n_joint_inputs() * n_joint_outputs(); }

    // Joint indices are row-major over parties in fixed party order (party 0
    // outermost). Every table and file format in the library shares this.
    Index joint_input_index(const std::vector<int>& x) const {
        return encode(x, inputs, "input");
    }

    Index joint_output_index(const std::vector<int>& a) const {
        return encode(a, outputs, "output");
    }

    std::vector<int> decode_input(Index ji) const { return decode(ji, inputs); }
    std::vector<int> decode_output(Index jo) const { return decode(jo, outputs); }

    Index cell_index(Index ji, Index jo) const { return ji * n_joint_outputs() + jo; }

    bool operator==(const Scenario&) const = default;

private:
    Index encode(const std::vector<int>& v, const std::vector<int>& card, const char* what) const {
        if (v.size() != card.size())
            throw ValidationError(std::string("scenario: ") + what + " tuple has wrong arity");
        Index idx = 0;
        for (std::size_t p = 0; p < v.size(); ++p) {
            if (v[p] < 0 || v[p] >= card[p])
                throw ValidationError(std::string("scenario: ") + what + " value out of range for party " +
                                      std::to_string(p));
            idx = idx * static_cast<Index>(card[p]) + static_cast<Index>(v[p]);
        }
        return idx;
    }

    static std::vector<int> decode(Index idx, const std::vector<int>& card) {
        std::vector<int> v(card.size());
        for (std::size_t p = card.size(); p-- > 0;) {
            v[p] = static_cast<int>(idx % static_cast<Index>(card[p]));
            idx /= static_cast<Index>(card[p]);
        }
        return v;
    }
};

} // namespace bell
