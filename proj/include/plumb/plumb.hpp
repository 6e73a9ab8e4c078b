#pragma once

#include "plumb/dcomb.hpp"
#include "plumb/errors.hpp"
#include "plumb/fullpath.hpp"
#include "plumb/grade.hpp"
#include "plumb/graph.hpp"
#include "plumb/intersection_form.hpp"
#include "plumb/lattice.hpp"
#include "plumb/module.hpp"
#include "plumb/verify.hpp"
