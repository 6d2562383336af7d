#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uamcap/vec2.hpp"

namespace uam {

/// One logged step: the state the vehicle acted from and the acceleration
/// it chose. Distances to absent entity kinds stay empty.
struct TrajectoryRow {
    double t = 0.0;
    int uav_id = 0;
    Vec2 position;
    Vec2 velocity;
    Vec2 acceleration;
    double d_dest = 0.0;
    std::optional<double> d_obst;
    std::optional<double> d_ppz;
};

struct TrajectoryLog {
    std::vector<TrajectoryRow> rows;
};

/// CSV columns: t,uav_id,x,y,vx,vy,ax,ay,d_dest,d_obst,d_ppz.
std::string timeseries_csv(const TrajectoryLog& log);
void export_timeseries(const TrajectoryLog& log, const std::filesystem::path& path);

}  // namespace uam
