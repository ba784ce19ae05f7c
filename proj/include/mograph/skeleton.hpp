#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace mograph {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;  // (w, x, y, z), right-handed, active

// World convention: Y is up, the ground plane is XZ.

struct Joint {
    std::string name;
    int parent = -1;  // -1 marks the root
    Vec3 offset = Vec3::Zero();  // meters, in parent space
};

/// Joint hierarchy in topological order (parent index < joint index) with
/// the set of salient joints used for transition costs.
struct Skeleton {
    std::vector<Joint> joints;
    std::vector<std::string> salient_joint_names;

    int index_of(const std::string& name) const;
    std::vector<int> salient_indices() const;

    /// Root plus any joint whose name contains head/hand/foot
    /// (case-insensitive). Used when a file does not list salient joints.
    static std::vector<std::string> guess_salient(const std::vector<Joint>& joints);

    /// Throws SchemaError on structural violations (bad parent order,
    /// multiple roots, unresolvable salient names).
    void validate() const;

    bool operator==(const Skeleton& other) const;
};

}  // namespace mograph
