#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "cubicvm/measures.hpp"
#include "cubicvm/tracer.hpp"

// traced cut systems and family measures are reused across test cases
inline const cubicvm::CutSystem& test_cuts(double tau) {
    static std::map<double, std::unique_ptr<cubicvm::CutSystem>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[tau];
    if (!slot) slot = std::make_unique<cubicvm::CutSystem>(cubicvm::build_cuts(cubicvm::make_param(tau)));
    return *slot;
}

inline const cubicvm::FamilyMeasure& test_family(double tau, int nodes = 2000) {
    static std::map<std::pair<double, int>, std::unique_ptr<cubicvm::FamilyMeasure>> cache;
    const cubicvm::CutSystem& cuts = test_cuts(tau);
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{tau, nodes}];
    if (!slot) slot = std::make_unique<cubicvm::FamilyMeasure>(cubicvm::family_measure(cuts, nodes));
    return *slot;
}
