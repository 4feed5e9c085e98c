#pragma once

namespace beam::phys {

inline constexpr double c = 299792458.0;          // speed of light [m/s]
inline constexpr double eps0 = 8.8541878128e-12;  // vacuum permittivity [F/m]
inline constexpr double q_e = 1.602176634e-19;    // elementary charge [C]
inline constexpr double m_e = 9.1093837015e-31;   // electron mass [kg]

}  // namespace beam::phys
