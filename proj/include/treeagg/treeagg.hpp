#pragma once

#include "treeagg/aggregate.hpp"
#include "treeagg/baselines.hpp"
#include "treeagg/bracketed.hpp"
#include "treeagg/cluster_set.hpp"
#include "treeagg/corpus.hpp"
#include "treeagg/driver.hpp"
#include "treeagg/error.hpp"
#include "treeagg/eval.hpp"
#include "treeagg/fixture.hpp"
#include "treeagg/labels.hpp"
#include "treeagg/parallel.hpp"
#include "treeagg/rf.hpp"
#include "treeagg/span.hpp"
#include "treeagg/tree.hpp"
