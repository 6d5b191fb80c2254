#! /usr/bin/env python

"""
Script for plotting generatrix tables written by "eswmt catenoid build".

Run "plot_generatrix.py -h" to see full description of inputs.

Multiple curves can be plotted by passing a comma-separated list of files; the neck
radius of each is read from its table. With --catenoid, the catenoid of the same neck
radius rho = tau cosh(z/tau) is drawn dashed for comparison.

Use "show" for the 2nd argument to show interactive plot instead of saving to file.
"""

# Python modules
import argparse

# Other Python modules
import numpy as np

# eswmt modules
from eswmt import eswmt_read
from eswmt.rotational import COLUMNS


# Main function
def main(**kwargs):

    # Extract inputs
    data_files = kwargs['data_files'].split(',')
    output_file = kwargs['output_file']
    x_name = kwargs['x_name']
    y_name = kwargs['y_name']
    labels = kwargs['labels']

    # Verify inputs
    for name in (x_name, y_name):
        if name not in COLUMNS:
            raise RuntimeError('Column {0} not one of {1}'.format(name,
                                                                 ', '.join(COLUMNS)))
    if labels is None:
        labels = data_files
    else:
        labels = labels.split(',')
        labels += data_files[len(labels):]

    # Load Python plotting modules
    if output_file != 'show':
        import matplotlib
        matplotlib.use('agg')
    import matplotlib.pyplot as plt

    # Plot data
    plt.figure()
    for data_file, label in zip(data_files, labels):
        data = eswmt_read.generatrix_csv(data_file)
        line, = plt.plot(data[x_name], data[y_name], '-', label=label)
        if kwargs['catenoid']:
            tau = data['rho'][np.argmin(np.abs(data['ell']))]
            z = data['z']
            rho = tau * np.cosh(z / tau)
            plt.plot({'rho': rho, 'z': z}.get(x_name, rho),
                     {'rho': rho, 'z': z}.get(y_name, z), '--', color=line.get_color(),
                     label='catenoid, tau = {0:g}'.format(tau))
    if kwargs['x_log']:
        plt.xscale('log')
    if kwargs['y_log']:
        plt.yscale('log')
    plt.xlim((kwargs['x_min'], kwargs['x_max']))
    plt.ylim((kwargs['y_min'], kwargs['y_max']))
    plt.xlabel(x_name)
    plt.ylabel(y_name)
    plt.legend(loc='best')
    if output_file == 'show':
        plt.show()
    else:
        plt.savefig(output_file, bbox_inches='tight')


# Execute main function
if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument('data_files',
                        help='comma-separated list of generatrix .csv files')
    parser.add_argument('output_file',
                        help=('name of output to be (over)written, possibly including '
                              'path; use "show" to show interactive plot instead'))
    parser.add_argument('-x', '--x_name',
                        default='rho',
                        help='column for the horizontal axis')
    parser.add_argument('-y', '--y_name',
                        default='z',
                        help='column for the vertical axis')
    parser.add_argument('-l', '--labels',
                        help='comma-separated list of labels for legend')
    parser.add_argument('--catenoid',
                        action='store_true',
                        help='overlay the catenoid with the same neck radius')
    parser.add_argument('--x_log',
                        action='store_true',
                        help='flag indicating x-axis should be log scaled')
    parser.add_argument('--y_log',
                        action='store_true',
                        help='flag indicating y-axis should be log scaled')
    parser.add_argument('--x_min',
                        type=float,
                        help='minimum for extent of plot')
    parser.add_argument('--x_max',
                        type=float,
                        help='maximum for extent of plot')
    parser.add_argument('--y_min',
                        type=float,
                        help='minimum for extent of plot')
    parser.add_argument('--y_max',
                        type=float,
                        help='maximum for extent of plot')
    args = parser.parse_args()
    main(**vars(args))
