#pragma once

#include "ptower/error.hpp"
#include "ptower/series/ring.hpp"
#include "ptower/series/ntt.hpp"
#include "ptower/series/series.hpp"
#include "ptower/series/precision.hpp"
#include "ptower/linalg/modmat.hpp"
#include "ptower/forms/eta.hpp"
#include "ptower/forms/basis.hpp"
#include "ptower/forms/filtration.hpp"
#include "ptower/operators/operators.hpp"
#include "ptower/partitions/arith.hpp"
#include "ptower/partitions/tower.hpp"
#include "ptower/lspaces/weights.hpp"
#include "ptower/lspaces/lifted.hpp"
#include "ptower/lspaces/dinv.hpp"
#include "ptower/lspaces/stabilize.hpp"
#include "ptower/lspaces/relations.hpp"
#include "ptower/io/record.hpp"
#include "ptower/lspaces/verify.hpp"
