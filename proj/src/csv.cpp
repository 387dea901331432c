#include "ablab/csv.hpp"

#include <charconv>
#include <system_error>

#include "ablab/error.hpp"

namespace ablab {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw Error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& out, const std::vector<FieldSample>& samples) {
    out << "x,y,z,Ax,Ay,Az,Bx,By,Bz\n";
    for (const auto& s : samples) {
        out << format_double(s.position.x) << ',' << format_double(s.position.y) << ','
            << format_double(s.position.z) << ',' << format_double(s.A.x) << ','
            << format_double(s.A.y) << ',' << format_double(s.A.z) << ','
            << format_double(s.B.x) << ',' << format_double(s.B.y) << ','
            << format_double(s.B.z) << '\n';
    }
}

void write_fringe_csv(std::ostream& out, const InterferencePattern& reference,
                      const InterferencePattern& shifted, double measured_shift) {
    if (reference.positions.size() != shifted.positions.size()) {
        throw ValidationError("write_fringe_csv: patterns have different lengths");
    }
    out << "screen_x,intensity_ref,intensity_shifted\n";
    for (std::size_t i = 0; i < reference.positions.size(); ++i) {
        out << format_double(reference.positions[i]) << ','
            << format_double(reference.intensities[i]) << ','
            << format_double(shifted.intensities[i]) << '\n';
    }
    out << "# shift_fraction=" << format_double(measured_shift) << '\n';
}

}  // namespace ablab
