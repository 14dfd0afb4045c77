#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fleetsim/assignment.hpp"
#include "fleetsim/core.hpp"

namespace fleetsim {

struct EconomicParams {
    Euros fcost = 2.4;            // fixed cost per trip
    Euros fare_per_km = 1.05;     // client fare per km
    Euros vcost_per_km = 0.2;     // vehicle cost per km
    double gamma_m_per_eur = 1.0 / 0.00085;  // scales euros into meters
    Euros initial_ledger = 0.0;

    void validate() const;
    double fare_per_m() const { return fare_per_km / 1000.0; }
    double vcost_per_m() const { return vcost_per_km / 1000.0; }
};

// Price(s) = fcost + fare * d(s)
Euros price(Meters trip_distance, const EconomicParams& econ);

// Earn(v,s) = Price(s) - vcost * (d(v,s) + d(s)); may be negative for long deadheads.
Euros earnings(Meters deadhead_distance, Meters trip_distance, const EconomicParams& econ);

enum class CompensationCase { One, Two };

struct CompensationQuote {
    CompensationCase which = CompensationCase::Two;
    Euros c = 0.0;
    Euros earn_old = 0.0;              // Earn(v, s_k) from the vehicle's current position
    Euros effective_income_new = 0.0;  // Earn(v, s_j) + c
};

struct ServiceSpec {
    RequestId id = -1;
    Point2D origin;
    Meters trip_distance = 0.0;  // d(s)
    Seconds created_at = 0.0;
};

// Side payment that keeps an economically rational driver indifferent or
// better when swapped from `from` to `to`, both measured from the vehicle's
// current position.
CompensationQuote compensation(const Point2D& vehicle_position, const ServiceSpec& from,
                               const ServiceSpec& to, const EconomicParams& econ);

struct CompensationRecord {
    Seconds time = 0.0;
    VehicleId vehicle = -1;
    RequestId old_request = -1;
    RequestId new_request = -1;
    CompensationCase which = CompensationCase::Two;
    Euros c = 0.0;
    Euros earn_old = 0.0;
    Euros effective_income_new = 0.0;
    Euros ledger_after = 0.0;
};

class MediatorLedger {
public:
    explicit MediatorLedger(Euros initial = 0.0) : earning_(initial) {}

    Euros earning() const { return earning_; }
    const std::vector<CompensationRecord>& log() const { return log_; }
    int zero_compensation_rejections() const { return zero_comp_rejections_; }

    void debit(const std::vector<CompensationRecord>& records, Euros total);
    void note_zero_compensation_rejection() { ++zero_comp_rejections_; }

    // CSV: time_s,vehicle,old_request,new_request,case,c_eur,ledger_after
    void export_csv(const std::string& path) const;

private:
    Euros earning_;
    std::vector<CompensationRecord> log_;
    int zero_comp_rejections_ = 0;
};

struct DynraVehicle {
    VehicleId id = -1;
    Point2D position;
};

struct DynraInput {
    // A_c: vehicles dispatched but not yet at their pickup, with their service.
    std::vector<std::pair<DynraVehicle, ServiceSpec>> current;
    std::vector<DynraVehicle> idle;
    std::vector<ServiceSpec> waiting;
};

struct DynraResult {
    // Final matching over every vehicle that ends up with a service.
    std::vector<std::pair<VehicleId, RequestId>> assignment;
    bool committed_new = false;  // step-4 guard outcome
    Euros total_compensation = 0.0;
    std::vector<CompensationRecord> applied;  // empty unless committed
};

// One mediator step: NVNR-append pending requests, re-match the whole
// assigned set minimizing distance + gamma-scaled compensations, then commit
// only if the ledger stays positive.
DynraResult dynra_step(const DynraInput& input, const EconomicParams& econ,
                       MediatorLedger& ledger, Seconds now);

}  // namespace fleetsim
