#pragma once

#include "selgame/core.hpp"
#include "selgame/strategies.hpp"
#include "selgame/solver.hpp"
#include "selgame/reflection.hpp"
#include "selgame/translate.hpp"
#include "selgame/spaces.hpp"
