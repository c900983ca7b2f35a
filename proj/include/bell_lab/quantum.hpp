#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/scenario.hpp"

namespace bell {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 10;  // dense amplitudes only; desk scale

/// A pure state of n qubits as 2^n complex amplitudes. Basis index bit order
/// follows the party order used everywhere else: party 0 is the most
/// significant bit, so |000> is index 0 and |111> is index 7.
struct StateVector {
    std::vector<Amplitude> amp;

    explicit StateVector(std::vector<Amplitude> amplitudes) : amp(std::move(amplitudes)) {
        int n = 0;
        while ((std::size_t{1} << n) < amp.size()) ++n;
        if (amp.empty() || (std::size_t{1} << n) != amp.size())
            throw ValidationError("state vector: length must be a power of two");
        if (n > kMaxQubits) throw ValidationError("state vector: more than 10 qubits");
    }

    int n_qubits() const {
        int n = 0;
        while ((std::size_t{1} << n) < amp.size()) ++n;
        return n;
    }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amp) s += std::norm(a);
        return std::sqrt(s);
    }

    void require_normalized(double tol = 1e-12) const {
        if (std::abs(norm() - 1.0) > tol)
            throw ValidationError("state vector: norm is " + std::to_string(norm()));
    }

    int bit_of(std::size_t basis_index, int party, int n_parties) const {
        return static_cast<int>((basis_index >> (n_parties - 1 - party)) & 1u);
    }
};

/// (|00> + |11>)/sqrt(2), the two-qubit maximally entangled state.
inline StateVector max_entangled_state() {
    const double r = 1.0 / std::numbers::sqrt2;
    return StateVector({{r, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {r, 0.0}});
}

/// (|000> + |111>)/sqrt(2).
inline StateVector ghz_state() {
    const double r = 1.0 / std::numbers::sqrt2;
    std::vector<Amplitude> a(8, Amplitude{0.0, 0.0});
    a[0] = {r, 0.0};
    a[7] = {r, 0.0};
    return StateVector(std::move(a));
}

/// A projective qubit measurement in the real x-z plane. theta is measured
/// from the z axis; outcome 0 corresponds to the +eigenvector
/// (cos(theta/2), sin(theta/2)), outcome 1 to (-sin(theta/2), cos(theta/2)).
struct QubitMeasurement {
    double theta = 0.0;

    std::array<double, 2> basis_vector(int outcome) const {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        return outcome == 0 ? std::array<double, 2>{c, s} : std::array<double, 2>{-s, c};
    }
};

/// A state plus, for every party and every input, a measurement choice. One
/// qubit per party.
struct QuantumSetup {
    StateVector state;
    std::vector<std::vector<QubitMeasurement>> settings;  // [party][input]

    void validate() const {
        state.require_normalized();
        const int n = state.n_qubits();
        if (settings.size() != static_cast<std::size_t>(n))
            throw ValidationError("quantum setup: need one setting list per qubit");
        for (const auto& per_party : settings)
            if (per_party.empty()) throw ValidationError("quantum setup: party with no inputs");
    }

    Scenario scenario() const {
        const int n = state.n_qubits();
        std::vector<int> inputs(n);
        for (int p = 0; p < n; ++p) inputs[p] = static_cast<int>(settings[p].size());
        return Scenario(n, inputs, std::vector<int>(n, 2));
    }
};

/// Born-rule behavior of a setup: p(outcomes | inputs) is the squared
/// magnitude of the projection of the state onto the tensor product of the
/// chosen basis vectors.
inline Behavior born_behavior(const QuantumSetup& q) {
    q.validate();
    const Scenario s = q.scenario();
    const int n = s.n_parties;
    Behavior b = Behavior::zeros(s);

    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        const auto x = s.decode_input(ji);
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const auto a = s.decode_output(jo);
            Amplitude proj{0.0, 0.0};
            for (std::size_t k = 0; k < q.state.amp.size(); ++k) {
                double basis_product = 1.0;
                for (int p = 0; p < n; ++p) {
                    const auto v = q.settings[p][x[p]].basis_vector(a[p]);
                    basis_product *= v[q.state.bit_of(k, p, n)];
                }
                proj += basis_product * q.state.amp[k];
            }
            b.p(ji, jo) = std::norm(proj);
        }
    }
    return b;
}

/// The canonical maximal-violation setup for the CHSH-type functional: the
/// two-qubit maximally entangled state with Alice measuring at {0, pi/2} and
/// Bob at {pi/4, -pi/4}. Its S value is 2 + sqrt(2).
inline QuantumSetup tsirelson_setup() {
    const double pi = std::numbers::pi;
    return QuantumSetup{max_entangled_state(),
                        {{QubitMeasurement{0.0}, QubitMeasurement{pi / 2.0}},
                         {QubitMeasurement{pi / 4.0}, QubitMeasurement{-pi / 4.0}}}};
}

} // namespace bell
