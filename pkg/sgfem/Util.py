__copyright__ = "Copyright 2015 Contributing Entities"
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
import csv
import os

import numpy as np
import psutil

from .Logger import SgfemLogger


class Util(object):
    """
    Util class.

    Collect useful stuff here that doesn't belong in any particular existing class.
    """
    #: Maps timedelta columns to units for :py:meth:`Util.write_dataframe`
    TIMEDELTA_COLUMNS_TO_UNITS      = {
        'step_duration'     : 'seconds',       # performance
    }

    #: Floats are written with this many significant digits, enough to round trip
    FLOAT_FORMAT                    = "%.17g"

    @staticmethod
    def write_dataframe(df, name, output_file, append=False):
        """
        Convenience method to write a dataframe as UTF-8 CSV with a header row, LF line endings and
        round-trip float formatting.

        :param df:          The dataframe to write
        :type  df:          :py:class:`pandas.DataFrame`
        :param name:        Name of the dataframe. Just used for logging.
        :type  name:        str
        :param output_file: The name of the file to which the dataframe will be written
        :type  output_file: str
        :param append:      Pass true to append to the existing output file, false otherwise
        :type  append:      bool

        Columns that are :py:class:`numpy.timedelta64` are written in the units specified in
        :py:attr:`Util.TIMEDELTA_COLUMNS_TO_UNITS` instead of "0 days 00:00:01.000000".
        """
        df_toprint = df.copy()
        for colname in list(df_toprint.columns):
            if str(df_toprint[colname].dtype).startswith("timedelta64"):
                units_str   = Util.TIMEDELTA_COLUMNS_TO_UNITS.get(colname, "seconds")
                df_toprint.rename(columns={colname: "%s %s" % (colname, units_str)}, inplace=True)
                df_toprint["%s %s" % (colname, units_str)] = df[colname]/np.timedelta64(1, 's')

        # if we're appending, keep the existing header order
        header_row = None
        if append and os.path.exists(output_file):
            with open(output_file, 'rt', encoding='utf-8') as df_file:
                header_row = next(csv.reader(df_file, delimiter=","))

        if header_row:
            df_toprint[header_row].to_csv(output_file, mode="a", index=False, header=False, encoding="utf-8",
                                          float_format=Util.FLOAT_FORMAT, lineterminator="\n")
            SgfemLogger.info("Appended %s dataframe to %s" % (name, output_file))
        else:
            df_toprint.to_csv(output_file, index=False, encoding="utf-8",
                              float_format=Util.FLOAT_FORMAT, lineterminator="\n")
            SgfemLogger.info("Wrote %s dataframe (%d rows) to %s" % (name, len(df_toprint), output_file))

    @staticmethod
    def write_text(lines, name, output_file):
        """
        Writes *lines* to *output_file*, one per line, with LF line endings.
        """
        with open(output_file, 'w', encoding='utf-8', newline='\n') as out:
            for line in lines:
                out.write("%s\n" % line)
        SgfemLogger.info("Wrote %s to %s" % (name, output_file))

    @staticmethod
    def get_process_mem_use_bytes():
        """
        Returns the process memory usage in bytes
        """
        return psutil.Process().memory_info().rss

    @staticmethod
    def get_process_mem_use_str():
        """
        Returns a string representing the process memory use.
        Use SI prefixes (not binary prefixes).  1KB = 1000 bytes
        """
        bytes = Util.get_process_mem_use_bytes()

        if bytes < 1000:
            return "%d bytes" % bytes
        if bytes < 1000*1000:
            return "%.1f KB" % (bytes/1000.0)
        if bytes < 1000*1000*1000:
            return "%.1f MB" % (bytes/(1000.0*1000.0))
        return "%.1f GB" % (bytes/(1000.0*1000.0*1000.0))

    @staticmethod
    def parse_list(val, convert=str):
        """
        Parses a comma separated string into a list, applying *convert* to each stripped item.
        Empty strings give an empty list.  Lists and tuples are converted item by item.
        """
        if isinstance(val, (list, tuple)):
            return [convert(item) for item in val]
        return [convert(item.strip()) for item in str(val).split(",") if item.strip() != ""]

    @staticmethod
    def format_list(values):
        """
        The inverse of :py:meth:`Util.parse_list`, for writing configuration back out.
        """
        return ",".join("%r" % value if isinstance(value, float) else str(value) for value in values)
