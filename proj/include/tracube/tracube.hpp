#pragma once

#include "tracube/bitvector.hpp"
#include "tracube/dac.hpp"
#include "tracube/events.hpp"
#include "tracube/grammar.hpp"
#include "tracube/ingest.hpp"
#include "tracube/k3tree.hpp"
#include "tracube/movement.hpp"
#include "tracube/oracle.hpp"
#include "tracube/query.hpp"
#include "tracube/snapshot.hpp"
#include "tracube/store.hpp"
#include "tracube/types.hpp"
