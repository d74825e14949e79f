#pragma once

namespace vsl {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSummarySchemaVersion = 1;

// Identifier of the travel-time definition reported in summaries: the area
// between the cumulative arrival and departure curves divided by the number
// of departed vehicles.
inline constexpr const char* kTravelTimeFormula = "cumulative_curve_area_over_departures";

}  // namespace vsl
