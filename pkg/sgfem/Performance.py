__copyright__ = "Copyright 2016 Contributing Entities"
__license__   = """
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
"""
import datetime
import os

import pandas as pd

from .Util import Util


class Performance(object):
    """
    Performance class.  Keeps track of time spent and memory used by each command step
    and each (method, p, N) cell of a study.
    """
    #: Performance column: Step name (e.g. solve). String.
    PERFORMANCE_COL_STEP_NAME                 = "step_name"
    #: Performance column: the study cell, e.g. "sgfem p=2 N=40", or empty
    PERFORMANCE_COL_CELL                      = "cell"
    #: Performance column: step start time
    PERFORMANCE_COL_START_TIME                = "start_time"
    PERFORMANCE_COL_END_TIME                  = "end_time"
    PERFORMANCE_COL_STEP_DURATION             = "step_duration"
    PERFORMANCE_COL_START_MEM_MB              = "start_mem_MB"
    PERFORMANCE_COL_END_MEM_MB                = "end_mem_MB"

    #: File to write performance results
    OUTPUT_PERFORMANCE_FILE                   = 'sgfem_performance.csv'

    def __init__(self):
        """
        Constructor.  Initialize empty record for performance info.
        """
        # maps PERFORMANCE_COL* to arrays of values
        self.step_record_dict = {
            Performance.PERFORMANCE_COL_STEP_NAME     :[],
            Performance.PERFORMANCE_COL_CELL          :[],
            Performance.PERFORMANCE_COL_START_TIME    :[],
            Performance.PERFORMANCE_COL_END_TIME      :[],
            Performance.PERFORMANCE_COL_START_MEM_MB  :[],
            Performance.PERFORMANCE_COL_END_MEM_MB    :[]
        }

        # will map cell => (step_name, start time (a datetime.datetime), starting mem usage in MB)
        self.steps = {}

    def record_step_start(self, step_name, cell=""):
        """
        Records the step start.
        If there was previously a step for this cell, then ends that and saves the duration of that step.
        """
        if cell in self.steps:
            self.record_step_end(cell)
        self.steps[cell] = (step_name, datetime.datetime.now(), Util.get_process_mem_use_bytes()/1000000.0)

    def record_step_end(self, cell=""):
        """
        Explicitly ends whatever step was happening for this cell.
        """
        if cell not in self.steps:
            return
        now       = datetime.datetime.now()
        mem_use   = Util.get_process_mem_use_bytes()/1000000.0
        prev_step = self.steps.pop(cell)

        self.step_record_dict[Performance.PERFORMANCE_COL_STEP_NAME   ].append(prev_step[0])
        self.step_record_dict[Performance.PERFORMANCE_COL_CELL        ].append(cell)
        self.step_record_dict[Performance.PERFORMANCE_COL_START_TIME  ].append(prev_step[1])
        self.step_record_dict[Performance.PERFORMANCE_COL_END_TIME    ].append(now)
        self.step_record_dict[Performance.PERFORMANCE_COL_START_MEM_MB].append(prev_step[2])
        self.step_record_dict[Performance.PERFORMANCE_COL_END_MEM_MB  ].append(mem_use)

    def add_records(self, records):
        """
        Adds step records made elsewhere (e.g. by a worker process), as a dict of column lists.
        """
        for key, values in records.items():
            self.step_record_dict[key].extend(values)

    def write(self, output_dir):
        """
        Writes the results to OUTPUT_PERFORMANCE_FILE as a csv.
        """
        performance_df = pd.DataFrame.from_dict(self.step_record_dict)

        performance_df[Performance.PERFORMANCE_COL_STEP_DURATION] = performance_df[Performance.PERFORMANCE_COL_END_TIME] - performance_df[Performance.PERFORMANCE_COL_START_TIME]

        Util.write_dataframe(performance_df, "performance_df", os.path.join(output_dir, Performance.OUTPUT_PERFORMANCE_FILE), append=False)
