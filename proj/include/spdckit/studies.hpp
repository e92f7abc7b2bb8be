#ifndef SPDCKIT_STUDIES_HPP
#define SPDCKIT_STUDIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "spdckit/scenario.hpp"

namespace spdc {

struct StudyDescription {
    std::string name;
    std::string summary;
};

/// The named studies: design, bandwidth-scan, waist-scan, jsi, jsi-fit, hom,
/// brightness.
const std::vector<StudyDescription>& list_studies();

struct RunOverrides {
    std::optional<int> grid_points;
    std::optional<PmModel> pm_model;
    bool seedless = false;  // accepted for interface stability; nothing here draws random numbers
};

/// Execute the scenario's study, write its artifacts (CSV data, JSON summary,
/// effective scenario echo) into out_dir, and print a one-line summary per
/// headline number. Identical inputs produce byte-identical data files.
void run_study(const Scenario& scenario, const std::string& out_dir,
               const RunOverrides& overrides = {});

}  // namespace spdc

#endif
