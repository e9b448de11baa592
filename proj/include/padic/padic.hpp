#pragma once

#include "padic/context.hpp"
#include "padic/zp.hpp"
#include "padic/orbit.hpp"
#include "padic/residue_field.hpp"
#include "padic/unramified.hpp"
#include "padic/matrix.hpp"
#include "padic/projection.hpp"
#include "padic/spectral.hpp"
#include "padic/function_ops.hpp"
