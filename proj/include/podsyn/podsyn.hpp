// Copyright 2026 The Podsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "podsyn/agents.hpp"
#include "podsyn/dataset.hpp"
#include "podsyn/digest.hpp"
#include "podsyn/dp.hpp"
#include "podsyn/error.hpp"
#include "podsyn/experiment.hpp"
#include "podsyn/field.hpp"
#include "podsyn/histogram.hpp"
#include "podsyn/net.hpp"
#include "podsyn/net_socket.hpp"
#include "podsyn/pipeline.hpp"
#include "podsyn/rng.hpp"
#include "podsyn/schema.hpp"
#include "podsyn/shamir.hpp"
#include "podsyn/synth.hpp"
#include "podsyn/text.hpp"
#include "podsyn/wire.hpp"
