#pragma once

// Umbrella header: the whole toolkit.
//
//   syntax.hpp      AST, parser, renderer, static validation
//   stores.hpp      data store (sigma), auxiliary store (delta), identifiers
//   transform.hpp   aug / inv / unaugment / ann / inv_annotated
//   seq_engine.hpp  small-step sequential engine with tracing
//   par_engine.hpp  parallel engine: schedules, forward/reverse runs,
//                   interleaving enumeration
//   io.hpp          JSON store documents and run checkpoints
//   harness.hpp     program generator, reversibility properties, shrinking,
//                   mutation sensitivity
//   cli.hpp         the `reverso` command-line surface as a function
//
// Everything is header-only; include this file (or the pieces you need) and
// link nothing.

#include "reverso/cli.hpp"
#include "reverso/errors.hpp"
#include "reverso/harness.hpp"
#include "reverso/io.hpp"
#include "reverso/par_engine.hpp"
#include "reverso/seq_engine.hpp"
#include "reverso/stores.hpp"
#include "reverso/syntax.hpp"
#include "reverso/transform.hpp"
#include "reverso/types.hpp"
