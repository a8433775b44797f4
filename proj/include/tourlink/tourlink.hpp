#pragma once

#include "tourlink/tournament.hpp"
#include "tourlink/flow.hpp"
#include "tourlink/linkage.hpp"
#include "tourlink/chains.hpp"
#include "tourlink/good_family.hpp"
#include "tourlink/linker.hpp"
#include "tourlink/constructions.hpp"
