#pragma once

#include "packflow/error.hpp"
#include "packflow/mesh.hpp"
#include "packflow/meshes.hpp"
#include "packflow/packing2d.hpp"
#include "packflow/quadrature.hpp"
#include "packflow/operators2d.hpp"
#include "packflow/integrator.hpp"
#include "packflow/flows2d.hpp"
#include "packflow/admissibility.hpp"
#include "packflow/packing3d.hpp"
