// csv.hpp - shortest round-trip number formatting and CSV writers

#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "coherent_product.hpp"

namespace sbdecoh {

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    if (r.ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, r.ptr);
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

inline void write_coherence_trace(std::ostream& os, const CoherenceTrace& t) {
    write_csv_row(os, {"tau", "gamma", "phi", "dtheta", "eta_re", "eta_im", "eta_abs"});
    for (std::size_t i = 0; i < t.times.size(); ++i)
        write_csv_row(os, {format_number(t.times[i]), format_number(t.gamma[i]), format_number(t.phi[i]),
                           format_number(t.dtheta[i]), format_number(t.eta[i].real()),
                           format_number(t.eta[i].imag()), format_number(std::abs(t.eta[i]))});
}

}  // namespace sbdecoh
