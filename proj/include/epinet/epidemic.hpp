#pragma once

#include <cstdint>
#include <vector>

#include "epinet/degree_model.hpp"
#include "epinet/infectious_period.hpp"

namespace epinet {

/// Non-decreasing degree sequence with even total degree.
struct DegreeSequence {
    std::vector<int> degrees;

    int n() const { return static_cast<int>(degrees.size()); }
    std::int64_t total_degree() const;
};

// i.i.d. draws from the degree model, sorted; an odd total is repaired by
// redrawing the final draw until the sum is even.
DegreeSequence sample_degree_sequence(const DegreeModel& model, int n, std::uint64_t seed);

// Wraps an explicit degree list (sorted here); rejects odd totals.
DegreeSequence make_degree_sequence(std::vector<int> degrees);

struct SimOptions {
    double beta = 1.0;
    InfectiousPeriodModel period = InfectiousPeriodModel::exponential(1.0);
    std::uint64_t seed = 0;

    // retire each vertex at sigma + min(L, max tau) instead of sigma + L;
    // the spread is unaltered, strong extinction then matches the standard
    // run's weak extinction exactly
    bool lprime_lifetimes = false;

    bool record_vertex_data = false;  // sigma, infector, lifetime, final status
    bool record_time_series = false;  // one row per event
    bool record_pairing = false;      // keep the pairing; complete it post hoc
    bool validate_invariants = false; // conservation checks after every event

    int initial_vertex = -1;          // fixed index, or -1 for uniform
    int initial_infective_count = 1;  // uniform distinct seeds when > 1
};

struct EventRow {
    double t;
    char type;  // 'I' infection, 'P' pairing without infection, 'R' recovery
    int vertex;
    std::int64_t n_s, n_i, n_r;
    std::int64_t x;  // pending-contact count over infectious vertices
};

struct SimulationOutcome {
    double t_star = 0.0;    // strong extinction; +inf if infectives persist forever
    double t_dagger = 0.0;  // weak extinction: first time the X counter hits 0
    std::int64_t infections = 0;  // ever-infected vertices, initial cases excluded
    double final_susceptible_fraction = 1.0;
    bool major = false;  // infections > log n
    std::uint64_t seed = 0;
    int n = 0;
    std::vector<int> initial_infectives;

    std::int64_t contact_events = 0;  // contacts fired by infectious vertices
    std::int64_t wasted_contacts = 0; // contacts that paired to non-susceptibles or were pre-paired
    std::int64_t pairings = 0;

    std::int64_t first_pairing_stub = -1;
    std::int64_t first_pairing_partner = -1;

    // filled when record_vertex_data is set (index = vertex)
    std::vector<double> sigma;     // infection time, NaN if never infected
    std::vector<int> infector;     // -1 for initial cases and the never infected
    std::vector<double> lifetime;  // drawn L (or L' in lprime mode)
    std::vector<char> final_status;  // 'S', 'I', 'R'

    // filled when record_pairing is set: partner stub per stub, completed
    // uniformly after extinction so every stub is paired
    std::vector<std::int64_t> partner;

    std::vector<EventRow> events;  // when record_time_series is set
};

SimulationOutcome run_epidemic(const DegreeSequence& seq, const SimOptions& opt);

struct NeighborStats {
    double p_ss = 0.0;  // fraction of susceptible-owned stubs whose partner is susceptible
    std::int64_t susceptible_vertices = 0;
    std::int64_t susceptible_stubs = 0;
    std::vector<std::int64_t> degree_histogram;  // degrees of ultimately susceptible vertices
};

// Requires an outcome with vertex data and a completed pairing record.
NeighborStats neighbor_susceptibility_stats(const DegreeSequence& seq, const SimulationOutcome& out);

} // namespace epinet
