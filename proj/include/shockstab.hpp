#pragma once

// Umbrella header: Hugoniot curve continuation and shock stability criteria
// for systems of conservation laws with convex entropy.

#include "shockstab/audit.hpp"
#include "shockstab/criteria.hpp"
#include "shockstab/errors.hpp"
#include "shockstab/expr/ast.hpp"
#include "shockstab/expr/build.hpp"
#include "shockstab/expr/jet.hpp"
#include "shockstab/expr/parse.hpp"
#include "shockstab/hugoniot.hpp"
#include "shockstab/serialize.hpp"
#include "shockstab/spectral.hpp"
#include "shockstab/systems.hpp"
#include "shockstab/types.hpp"
#include "shockstab/validate.hpp"
