# Generated by Django 5.2.4 on 2026-10-19 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('identities', 'Hermite and Wick identities'), ('covcheck', 'Covariance oracle'), ('sample', 'Sampler fidelity'), ('gmc-moments', 'GMC moment identities'), ('series-check', 'Pathwise series identity'), ('growth-report', 'Coefficient growth'), ('thickness', 'Thick points'), ('badmass', 'Good/bad decomposition'), ('toy-martingale', 'Toy martingale')], max_length=32)),
                ('seed', models.BigIntegerField()),
                ('config', models.JSONField()),
                ('passed', models.BooleanField(default=False)),
                ('check_count', models.IntegerField(default=0)),
                ('failed_count', models.IntegerField(default=0)),
                ('output_dir', models.CharField(max_length=500)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
        migrations.CreateModel(
            name='CheckResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=200)),
                ('oracle_kind', models.CharField(max_length=100)),
                ('oracle_value', models.FloatField(blank=True, null=True)),
                ('estimate', models.FloatField(blank=True, null=True)),
                ('std_error', models.FloatField(blank=True, null=True)),
                ('tolerance', models.FloatField(blank=True, null=True)),
                ('passed', models.BooleanField()),
                ('hard', models.BooleanField(default=True)),
                ('reproduce', models.CharField(blank=True, max_length=500)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='checks', to='harness.experimentrun')),
            ],
            options={
                'ordering': ['id'],
            },
        ),
    ]
