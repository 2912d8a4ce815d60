#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "phaseless/forward_obstacle.hpp"
#include "phaseless/forward_source.hpp"
#include "phaseless/sampling_obstacle.hpp"

namespace phaseless {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip decimal form.
std::string format_double(double v);

// key = value lines.
void write_metadata(const std::string& path, const Metadata& meta);

// mode,obs_index,inc_index,re,im for the four mode pairs (mode = pp, ps, sp, ss).
void write_far_field_matrix(const std::string& path, const FarFieldMatrix& u);
// One mode pair only; used for retrieved shear-shear fields.
void write_far_field_pair(const std::string& path, const std::string& mode, const Eigen::MatrixXcd& u);
// mode,obs_index,freq_index,re,im
void write_multi_frequency(const std::string& path, const std::string& mode, const Eigen::MatrixXcd& u);

// x,y,value in row-major order.
void write_indicator_csv(const std::string& path, const IndicatorField& field);
// Plain PGM (P2), 255 levels, min-max normalized, top row = largest y.
void write_indicator_pgm(const std::string& path, const IndicatorField& field);

}  // namespace phaseless
