#include "fleetsim/taxi_economics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace fleetsim {

void EconomicParams::validate() const {
    if (!(fare_per_km > vcost_per_km) || !(vcost_per_km > 0.0)) {
        throw std::invalid_argument("EconomicParams: requires fare > vcost > 0");
    }
    if (fcost < 0.0) throw std::invalid_argument("EconomicParams: fcost must be >= 0");
    if (!(gamma_m_per_eur > 0.0)) throw std::invalid_argument("EconomicParams: gamma must be > 0");
}

Euros price(Meters trip_distance, const EconomicParams& econ) {
    return econ.fcost + econ.fare_per_m() * trip_distance;
}

Euros earnings(Meters deadhead_distance, Meters trip_distance, const EconomicParams& econ) {
    return price(trip_distance, econ) - econ.vcost_per_m() * (deadhead_distance + trip_distance);
}

CompensationQuote compensation(const Point2D& vehicle_position, const ServiceSpec& from,
                               const ServiceSpec& to, const EconomicParams& econ) {
    Meters deadhead_from = euclidean_distance(vehicle_position, from.origin);
    Meters deadhead_to = euclidean_distance(vehicle_position, to.origin);
    Meters td_from = from.trip_distance + deadhead_from;
    Meters td_to = to.trip_distance + deadhead_to;

    Euros earn_from = earnings(deadhead_from, from.trip_distance, econ);
    Euros earn_to = earnings(deadhead_to, to.trip_distance, econ);

    CompensationQuote quote;
    quote.earn_old = earn_from;
    if (td_from < td_to) {
        quote.which = CompensationCase::One;
        quote.c = earn_from + (td_to - td_from) * (econ.fare_per_m() - econ.vcost_per_m()) - earn_to;
    } else {
        quote.which = CompensationCase::Two;
        quote.c = earn_from - earn_to;
    }
    quote.effective_income_new = earn_to + quote.c;
    return quote;
}

void MediatorLedger::debit(const std::vector<CompensationRecord>& records, Euros total) {
    earning_ -= total;
    for (CompensationRecord r : records) {
        r.ledger_after = earning_;
        log_.push_back(r);
    }
}

void MediatorLedger::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("MediatorLedger: cannot write " + path);
    out.precision(10);
    out << "time_s,vehicle,old_request,new_request,case,c_eur,ledger_after\n";
    for (const CompensationRecord& r : log_) {
        out << r.time << "," << r.vehicle << "," << r.old_request << "," << r.new_request << ","
            << (r.which == CompensationCase::One ? 1 : 2) << "," << r.c << "," << r.ledger_after
            << "\n";
    }
}

DynraResult dynra_step(const DynraInput& input, const EconomicParams& econ,
                       MediatorLedger& ledger, Seconds now) {
    // Step 1: append pending requests to A_c with the NVNR rule. Newly
    // assigned vehicles are obliged to accept and carry no compensation.
    std::vector<ServiceSpec> nvnr_requests;
    std::vector<Vehicle> nvnr_vehicles;
    std::vector<ServiceRequest> nvnr_shells;
    for (const ServiceSpec& s : input.waiting) {
        ServiceRequest shell;
        shell.id = s.id;
        shell.origin = s.origin;
        shell.created_at = s.created_at;
        nvnr_shells.push_back(shell);
        nvnr_requests.push_back(s);
    }
    for (const DynraVehicle& v : input.idle) {
        Vehicle shell;
        shell.id = v.id;
        shell.position = v.position;
        shell.kind = VehicleKind::Taxi;
        nvnr_vehicles.push_back(shell);
    }

    struct Entry {
        DynraVehicle vehicle;
        std::optional<ServiceSpec> prior;  // compensation applies only with a prior service
        ServiceSpec service;               // service held in A_c
    };
    std::vector<Entry> a_c;
    for (const auto& [vehicle, service] : input.current) {
        a_c.push_back({vehicle, service, service});
    }
    Assignment appended = nearest_rule(nvnr_shells, nvnr_vehicles, NearestMode::NVNR);
    for (const auto& [vi, ri] : appended.pairs) {
        a_c.push_back({input.idle[vi], std::nullopt, nvnr_requests[ri]});
    }

    DynraResult result;
    if (a_c.empty()) return result;

    std::sort(a_c.begin(), a_c.end(),
              [](const Entry& a, const Entry& b) { return a.vehicle.id < b.vehicle.id; });
    std::vector<ServiceSpec> services;
    for (const Entry& e : a_c) services.push_back(e.service);
    std::sort(services.begin(), services.end(),
              [](const ServiceSpec& a, const ServiceSpec& b) { return a.id < b.id; });

    // Step 2: optimal re-match of the whole set, cost = pickup distance plus
    // gamma-scaled compensation relative to A_c.
    int k = static_cast<int>(a_c.size());
    CostMatrix costs(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const Entry& e = a_c[i];
            const ServiceSpec& s = services[j];
            double cost = euclidean_distance(e.vehicle.position, s.origin);
            if (e.prior && e.prior->id != s.id) {
                cost += econ.gamma_m_per_eur * compensation(e.vehicle.position, *e.prior, s, econ).c;
            }
            costs.at(i, j) = cost;
        }
    }
    Assignment optimal = solve_optimal_exact(costs);

    // Step 3: overall compensation implied by A_c -> A_n.
    Euros c_total = 0.0;
    bool plan_changed = false;
    std::vector<CompensationRecord> records;
    for (const auto& [vi, si] : optimal.pairs) {
        const Entry& e = a_c[vi];
        const ServiceSpec& s = services[si];
        if (e.service.id != s.id) plan_changed = true;
        if (e.prior && e.prior->id != s.id) {
            CompensationQuote q = compensation(e.vehicle.position, *e.prior, s, econ);
            c_total += q.c;
            CompensationRecord r;
            r.time = now;
            r.vehicle = e.vehicle.id;
            r.old_request = e.prior->id;
            r.new_request = s.id;
            r.which = q.which;
            r.c = q.c;
            r.earn_old = q.earn_old;
            r.effective_income_new = q.effective_income_new;
            records.push_back(r);
        }
    }
    result.total_compensation = c_total;

    // Step 4: commit only if the mediator stays in the black.
    if (ledger.earning() - c_total > 0.0) {
        ledger.debit(records, c_total);
        result.applied.assign(ledger.log().end() - static_cast<long>(records.size()),
                              ledger.log().end());
        result.committed_new = true;
        for (const auto& [vi, si] : optimal.pairs) {
            result.assignment.emplace_back(a_c[vi].vehicle.id, services[si].id);
        }
    } else {
        if (c_total == 0.0 && plan_changed) {
            ledger.note_zero_compensation_rejection();
        }
        for (const Entry& e : a_c) {
            result.assignment.emplace_back(e.vehicle.id, e.service.id);
        }
    }
    std::sort(result.assignment.begin(), result.assignment.end());
    return result;
}

}  // namespace fleetsim
