#pragma once

#include "lvsde/core.hpp"
#include "lvsde/distances.hpp"
#include "lvsde/eval.hpp"
#include "lvsde/forces.hpp"
#include "lvsde/phases.hpp"
#include "lvsde/splitting.hpp"
