#pragma once

#include "vpuq/study_landau.hpp"
#include "vpuq/study_rate.hpp"
#include "vpuq/study_scaling.hpp"
#include "vpuq/study_trend.hpp"

namespace vpuq {

/// Run the configured study; returns true when every asserted property held.
inline bool run_study(const StudyConfig& cfg) {
    switch (cfg.kind) {
        case StudyKind::LandauBenchmark:
            return study_landau(cfg).pass;
        case StudyKind::WassersteinTrend: {
            const auto rep = study_wasserstein_trend(cfg);
            return rep.w1_nonincreasing && rep.g_decreasing;
        }
        case StudyKind::RegularityRate: {
            const auto rep = study_regularity_rate(cfg);
            return rep.violations == 0;
        }
        case StudyKind::ScalingVerify:
            return study_scaling(cfg).all_pass;
        case StudyKind::ASetReport: {
            const auto rep = study_aset_report(cfg);
            return rep.member.at(rep.z0_index);  // reference-node self-membership
        }
    }
    return false;
}

}  // namespace vpuq
