#ifndef HRRIS_UNITS_HPP
#define HRRIS_UNITS_HPP

#include <cmath>

namespace hrris {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double w) { return 30.0 + 10.0 * std::log10(w); }

} // namespace hrris

#endif
