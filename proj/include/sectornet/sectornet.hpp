#ifndef SECTORNET_SECTORNET_HPP_
#define SECTORNET_SECTORNET_HPP_

#include "sectornet/community.hpp"
#include "sectornet/date.hpp"
#include "sectornet/errors.hpp"
#include "sectornet/graph_io.hpp"
#include "sectornet/histogram.hpp"
#include "sectornet/ingest.hpp"
#include "sectornet/matrix_io.hpp"
#include "sectornet/panel_io.hpp"
#include "sectornet/pipeline.hpp"
#include "sectornet/planarity.hpp"
#include "sectornet/pmfg.hpp"
#include "sectornet/sectormetrics.hpp"
#include "sectornet/spectra.hpp"
#include "sectornet/synthetic.hpp"
#include "sectornet/text.hpp"

#endif // SECTORNET_SECTORNET_HPP_
