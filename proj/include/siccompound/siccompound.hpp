#pragma once

#include "siccompound/certification.hpp"
#include "siccompound/clique.hpp"
#include "siccompound/compound.hpp"
#include "siccompound/discrimination.hpp"
#include "siccompound/error.hpp"
#include "siccompound/format.hpp"
#include "siccompound/linalg.hpp"
#include "siccompound/qkd.hpp"
#include "siccompound/report.hpp"
#include "siccompound/search.hpp"
#include "siccompound/whgroup.hpp"
