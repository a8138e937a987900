#pragma once

#include <string>

#include "loewner/report.hpp"

namespace loewner::svg {

// Log-log PSD with the fitted power law over its fit range.
std::string psd_plot(const diagnostics::PsdEstimate& psd,
                     const diagnostics::SlopeFit* fit, const std::string& title);

// Q-Q scatter with the 45 degree reference line.
std::string qq_plot(const diagnostics::QQResult& qq, const std::string& title);

std::string histogram_plot(const diagnostics::Histogram& local,
                           const diagnostics::Histogram& global, const std::string& title,
                           const std::string& x_label);

}  // namespace loewner::svg
