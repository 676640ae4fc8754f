#include "epinet/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace epinet {

std::int64_t DegreeSequence::total_degree() const {
    std::int64_t total = 0;
    for (int d : degrees) total += d;
    return total;
}

DegreeSequence sample_degree_sequence(const DegreeModel& model, int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("degree sequence requires n >= 2");
    Rng rng(derive_seed(seed, 0xd5eced5eULL));
    DegreeSequence seq;
    seq.degrees.resize(static_cast<std::size_t>(n));
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) {
        seq.degrees[static_cast<std::size_t>(i)] = model.sample(rng);
        total += seq.degrees[static_cast<std::size_t>(i)];
    }
    // parity repair: redraw the final draw; every other draw stays i.i.d.
    int redraws = 0;
    while (total % 2 != 0) {
        total -= seq.degrees[static_cast<std::size_t>(n - 1)];
        seq.degrees[static_cast<std::size_t>(n - 1)] = model.sample(rng);
        total += seq.degrees[static_cast<std::size_t>(n - 1)];
        if (++redraws > 1000)
            throw std::runtime_error("degree parity repair failed: family cannot produce an even total");
    }
    std::sort(seq.degrees.begin(), seq.degrees.end());
    return seq;
}

DegreeSequence make_degree_sequence(std::vector<int> degrees) {
    for (int d : degrees)
        if (d < 0) throw std::invalid_argument("negative degree");
    std::sort(degrees.begin(), degrees.end());
    DegreeSequence seq{std::move(degrees)};
    if (seq.total_degree() % 2 != 0) throw std::invalid_argument("total degree must be even");
    return seq;
}

namespace {

struct Event {
    double time;
    std::uint8_t kind;  // 0 = contact, 1 = recovery; contacts win ties
    std::uint64_t seq;
    int vertex;
    std::int64_t stub;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return a.kind > b.kind;
        return a.seq > b.seq;
    }
};

class Engine {
public:
    Engine(const DegreeSequence& seq, const SimOptions& opt)
        : seq_(seq), opt_(opt), n_(seq.n()), rng_(opt.seed) {
        if (!(opt.beta > 0.0)) throw std::invalid_argument("beta must be > 0");
        stub_offset_.resize(static_cast<std::size_t>(n_) + 1, 0);
        for (int v = 0; v < n_; ++v)
            stub_offset_[static_cast<std::size_t>(v) + 1] =
                stub_offset_[static_cast<std::size_t>(v)] + seq.degrees[static_cast<std::size_t>(v)];
        ell_ = stub_offset_.back();
        owner_.resize(static_cast<std::size_t>(ell_));
        for (int v = 0; v < n_; ++v)
            for (std::int64_t s = stub_offset_[static_cast<std::size_t>(v)];
                 s < stub_offset_[static_cast<std::size_t>(v) + 1]; ++s)
                owner_[static_cast<std::size_t>(s)] = v;

        partner_.assign(static_cast<std::size_t>(ell_), -1);
        pool_.resize(static_cast<std::size_t>(ell_));
        pool_pos_.resize(static_cast<std::size_t>(ell_));
        for (std::int64_t s = 0; s < ell_; ++s) {
            pool_[static_cast<std::size_t>(s)] = s;
            pool_pos_[static_cast<std::size_t>(s)] = s;
        }

        status_.assign(static_cast<std::size_t>(n_), 'S');
        sigma_.assign(static_cast<std::size_t>(n_), std::numeric_limits<double>::quiet_NaN());
        pending_.assign(static_cast<std::size_t>(n_), 0);
        unpaired_.assign(static_cast<std::size_t>(n_), 0);
        for (int v = 0; v < n_; ++v) unpaired_[static_cast<std::size_t>(v)] = seq.degrees[static_cast<std::size_t>(v)];
        if (opt.record_vertex_data) {
            infector_.assign(static_cast<std::size_t>(n_), -1);
            lifetime_.assign(static_cast<std::size_t>(n_), std::numeric_limits<double>::quiet_NaN());
        }

        n_s_ = n_;
        e_s_ = ell_;
    }

    SimulationOutcome run() {
        choose_initial_cases();
        for (int v : initial_) infect(v, 0.0, -1);
        after_event(0.0, 'I', initial_.back());

        while (!queue_.empty() && n_i_ > 0) {
            const Event ev = queue_.top();
            queue_.pop();
            if (ev.kind == 0)
                handle_contact(ev);
            else
                handle_recovery(ev);
            if (n_i_ == 0) {
                t_star_ = ev.time;
                break;
            }
        }
        if (n_i_ > 0) t_star_ = kInf;  // infinite infectious periods keep cases alive forever

        return finish();
    }

private:
    void choose_initial_cases() {
        const int count = std::max(1, opt_.initial_infective_count);
        if (opt_.initial_vertex >= 0) {
            if (opt_.initial_vertex >= n_) throw std::invalid_argument("initial vertex out of range");
            initial_.push_back(opt_.initial_vertex);
        }
        while (static_cast<int>(initial_.size()) < count) {
            const int v = static_cast<int>(rng_.uniform_below(static_cast<std::uint64_t>(n_)));
            if (std::find(initial_.begin(), initial_.end(), v) == initial_.end()) initial_.push_back(v);
        }
    }

    void infect(int v, double t, int from) {
        const auto uv = static_cast<std::size_t>(v);
        status_[uv] = 'I';
        --n_s_;
        ++n_i_;
        sigma_[uv] = t;
        ++total_infected_;
        // unpaired stubs of a vertex leaving S move from E_S to E_I
        e_s_ -= unpaired_[uv];
        e_i_ += unpaired_[uv];

        const double life = opt_.period.sample(rng_);
        double max_tau = 0.0;
        int scheduled = 0;
        for (std::int64_t s = stub_offset_[uv]; s < stub_offset_[uv + 1]; ++s) {
            if (partner_[static_cast<std::size_t>(s)] >= 0) continue;
            const double tau = rng_.exponential(opt_.beta);
            max_tau = std::max(max_tau, tau);
            queue_.push(Event{t + tau, 0, seq_no_++, v, s});
            ++scheduled;
        }
        pending_[uv] = scheduled;
        x_ += scheduled;

        const double retire = opt_.lprime_lifetimes ? std::min(life, max_tau) : life;
        if (std::isfinite(retire)) queue_.push(Event{t + retire, 1, seq_no_++, v, -1});
        if (opt_.record_vertex_data) {
            infector_[uv] = from;
            lifetime_[uv] = retire;
        }
    }

    void handle_contact(const Event& ev) {
        const auto uv = static_cast<std::size_t>(ev.vertex);
        if (status_[uv] != 'I') return;  // recovered first; nothing fires
        --pending_[uv];
        --x_;
        ++contact_events_;

        const auto us = static_cast<std::size_t>(ev.stub);
        if (partner_[us] >= 0) {
            // this stub was paired by someone else's contact; wasted
            ++wasted_contacts_;
            after_event(ev.time, 'P', ev.vertex);
            return;
        }

        pool_remove(ev.stub);
        const std::int64_t b = pool_[static_cast<std::size_t>(rng_.uniform_below(pool_.size()))];
        pool_remove(b);
        partner_[us] = b;
        partner_[static_cast<std::size_t>(b)] = ev.stub;
        ++pairings_;
        if (pairings_ == 1) {
            first_stub_ = ev.stub;
            first_partner_ = b;
        }

        --unpaired_[uv];
        --e_i_;
        e_p_ += 2;
        const int w = owner_[static_cast<std::size_t>(b)];
        const auto uw = static_cast<std::size_t>(w);
        --unpaired_[uw];
        char row_type = 'P';
        if (status_[uw] == 'S') {
            --e_s_;
            infect(w, ev.time, ev.vertex);
            row_type = 'I';
        } else {
            ++wasted_contacts_;
            if (status_[uw] == 'I')
                --e_i_;
            else
                --e_r_;
        }
        after_event(ev.time, row_type, row_type == 'I' ? w : ev.vertex);
    }

    void handle_recovery(const Event& ev) {
        const auto uv = static_cast<std::size_t>(ev.vertex);
        status_[uv] = 'R';
        --n_i_;
        ++n_r_;
        x_ -= pending_[uv];
        pending_[uv] = 0;
        e_i_ -= unpaired_[uv];
        e_r_ += unpaired_[uv];
        after_event(ev.time, 'R', ev.vertex);
    }

    void after_event(double t, char type, int vertex) {
        if (x_ == 0 && !t_dagger_set_) {
            t_dagger_ = t;
            t_dagger_set_ = true;
        }
        if (opt_.record_time_series)
            events_.push_back(EventRow{t, type, vertex, n_s_, n_i_, n_r_, x_});
        if (opt_.validate_invariants) validate(t);
    }

    void validate(double t) {
        if (n_s_ + n_i_ + n_r_ != n_) throw std::logic_error("vertex conservation violated");
        if (e_s_ + e_i_ + e_r_ + e_p_ != ell_) throw std::logic_error("half-edge conservation violated");
        if (x_ < 0) throw std::logic_error("negative pending-contact count");
        if (t < last_time_) throw std::logic_error("event times not monotone");
        last_time_ = t;
        if (++events_since_recount_ >= 4096) {
            events_since_recount_ = 0;
            recount();
        }
    }

    void recount() {
        std::int64_t es = 0, ei = 0, er = 0, ep = 0, ns = 0, ni = 0, nr = 0;
        for (int v = 0; v < n_; ++v) {
            const auto uv = static_cast<std::size_t>(v);
            std::int64_t unpaired = 0;
            for (std::int64_t s = stub_offset_[uv]; s < stub_offset_[uv + 1]; ++s)
                if (partner_[static_cast<std::size_t>(s)] < 0) ++unpaired;
            if (unpaired != unpaired_[uv]) throw std::logic_error("stale unpaired-stub count");
            switch (status_[uv]) {
                case 'S': ++ns; es += unpaired; break;
                case 'I': ++ni; ei += unpaired; break;
                default: ++nr; er += unpaired; break;
            }
            ep += seq_.degrees[uv] - unpaired;
        }
        if (es != e_s_ || ei != e_i_ || er != e_r_ || ep != e_p_ || ns != n_s_ || ni != n_i_ || nr != n_r_)
            throw std::logic_error("full recount disagrees with running counts");
    }

    void complete_pairing() {
        while (!pool_.empty()) {
            const std::int64_t a = pool_.back();
            pool_remove(a);
            const std::int64_t b = pool_[static_cast<std::size_t>(rng_.uniform_below(pool_.size()))];
            pool_remove(b);
            partner_[static_cast<std::size_t>(a)] = b;
            partner_[static_cast<std::size_t>(b)] = a;
        }
    }

    SimulationOutcome finish() {
        if (!t_dagger_set_) {
            // unreachable: X hits zero no later than the last recovery
            t_dagger_ = t_star_;
        }
        SimulationOutcome out;
        out.t_star = t_star_;
        out.t_dagger = t_dagger_;
        out.infections = total_infected_ - static_cast<std::int64_t>(initial_.size());
        out.final_susceptible_fraction = static_cast<double>(n_s_) / static_cast<double>(n_);
        out.major = static_cast<double>(out.infections) > std::log(static_cast<double>(n_));
        out.seed = opt_.seed;
        out.n = n_;
        out.initial_infectives = initial_;
        out.contact_events = contact_events_;
        out.wasted_contacts = wasted_contacts_;
        out.pairings = pairings_;
        out.first_pairing_stub = first_stub_;
        out.first_pairing_partner = first_partner_;
        if (opt_.record_vertex_data) {
            out.sigma = std::move(sigma_);
            out.infector = std::move(infector_);
            out.lifetime = std::move(lifetime_);
            out.final_status.assign(status_.begin(), status_.end());
        }
        if (opt_.record_pairing) {
            complete_pairing();
            out.partner = std::move(partner_);
        }
        if (opt_.record_time_series) out.events = std::move(events_);
        return out;
    }

    void pool_remove(std::int64_t stub) {
        const std::int64_t idx = pool_pos_[static_cast<std::size_t>(stub)];
        const std::int64_t last = pool_.back();
        pool_[static_cast<std::size_t>(idx)] = last;
        pool_pos_[static_cast<std::size_t>(last)] = idx;
        pool_.pop_back();
    }

    const DegreeSequence& seq_;
    const SimOptions& opt_;
    int n_;
    Rng rng_;

    std::int64_t ell_ = 0;
    std::vector<std::int64_t> stub_offset_;
    std::vector<int> owner_;
    std::vector<std::int64_t> partner_;
    std::vector<std::int64_t> pool_, pool_pos_;

    std::vector<char> status_;
    std::vector<double> sigma_, lifetime_;
    std::vector<int> infector_;
    std::vector<int> pending_;
    std::vector<std::int64_t> unpaired_;

    std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
    std::uint64_t seq_no_ = 0;

    std::vector<int> initial_;
    std::int64_t n_s_ = 0, n_i_ = 0, n_r_ = 0;
    std::int64_t e_s_ = 0, e_i_ = 0, e_r_ = 0, e_p_ = 0;
    std::int64_t x_ = 0;
    std::int64_t total_infected_ = 0;
    std::int64_t contact_events_ = 0, wasted_contacts_ = 0, pairings_ = 0;
    std::int64_t first_stub_ = -1, first_partner_ = -1;
    double t_star_ = 0.0, t_dagger_ = 0.0, last_time_ = 0.0;
    bool t_dagger_set_ = false;
    int events_since_recount_ = 0;

    std::vector<EventRow> events_;
};

} // namespace

SimulationOutcome run_epidemic(const DegreeSequence& seq, const SimOptions& opt) {
    Engine engine(seq, opt);
    return engine.run();
}

NeighborStats neighbor_susceptibility_stats(const DegreeSequence& seq, const SimulationOutcome& out) {
    if (out.partner.empty() || out.final_status.empty())
        throw std::invalid_argument("neighbor stats require vertex data and a pairing record");
    NeighborStats stats;
    const int n = seq.n();
    std::vector<std::int64_t> offset(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v)
        offset[static_cast<std::size_t>(v) + 1] =
            offset[static_cast<std::size_t>(v)] + seq.degrees[static_cast<std::size_t>(v)];
    std::vector<int> owner(static_cast<std::size_t>(offset.back()));
    for (int v = 0; v < n; ++v)
        for (std::int64_t s = offset[static_cast<std::size_t>(v)]; s < offset[static_cast<std::size_t>(v) + 1]; ++s)
            owner[static_cast<std::size_t>(s)] = v;

    const int max_deg = seq.degrees.empty() ? 0 : seq.degrees.back();
    stats.degree_histogram.assign(static_cast<std::size_t>(max_deg) + 1, 0);
    std::int64_t ss = 0;
    for (int v = 0; v < n; ++v) {
        if (out.final_status[static_cast<std::size_t>(v)] != 'S') continue;
        ++stats.susceptible_vertices;
        ++stats.degree_histogram[static_cast<std::size_t>(seq.degrees[static_cast<std::size_t>(v)])];
        for (std::int64_t s = offset[static_cast<std::size_t>(v)]; s < offset[static_cast<std::size_t>(v) + 1]; ++s) {
            const std::int64_t b = out.partner[static_cast<std::size_t>(s)];
            ++stats.susceptible_stubs;
            if (out.final_status[static_cast<std::size_t>(owner[static_cast<std::size_t>(b)])] == 'S') ++ss;
        }
    }
    stats.p_ss = stats.susceptible_stubs > 0
                     ? static_cast<double>(ss) / static_cast<double>(stats.susceptible_stubs)
                     : std::numeric_limits<double>::quiet_NaN();
    return stats;
}

} // namespace epinet
