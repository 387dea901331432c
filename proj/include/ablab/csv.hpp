#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ablab/interference.hpp"
#include "ablab/sources.hpp"

namespace ablab {

// Shortest decimal text that parses back to exactly the same double, so CSV
// output is both compact and byte-for-byte reproducible.
std::string format_double(double v);

// Field map rows "x,y,z,Ax,Ay,Az,Bx,By,Bz" with a header line, LF endings.
void write_field_csv(std::ostream& out, const std::vector<FieldSample>& samples);

// Fringe profiles "screen_x,intensity_ref,intensity_shifted" followed by a
// comment line carrying the measured shift fraction.
void write_fringe_csv(std::ostream& out, const InterferencePattern& reference,
                      const InterferencePattern& shifted, double measured_shift);

}  // namespace ablab
